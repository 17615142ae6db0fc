#include <gtest/gtest.h>

#include <random>

#include "knapcrack/error.hpp"
#include "knapcrack/formulations.hpp"
#include "knapcrack/pipeline.hpp"
#include "knapcrack/reduce.hpp"

using namespace knapcrack;

namespace {

struct Prepared {
  LdeSystem sys;
  KernelDecomposition kd;
  IntVector xb;
};

Prepared prepare(const LdeSystem& sys) {
  KernelDecomposition kd = decompose(sys);
  auto xb = special_solution(kd, sys.b());
  if (!xb) throw std::runtime_error("fixture has no integer solution");
  return {sys, std::move(kd), std::move(*xb)};
}

Prepared toy() { return prepare(LdeSystem(IntMatrix{{3, 15, 6}}, make_int_vector({9}))); }

// x - y must be an integer combination of D's columns.
bool differs_by_lattice_vector(const IntMatrix& D, const IntVector& x, const IntVector& y) {
  IntVector diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  const auto coef = solve_exact(D, diff);
  if (!coef) return false;
  for (const auto& c : *coef)
    if (c.get_den() != 1) return false;
  return true;
}

IntVector shifted(const IntMatrix& D, const IntVector& x, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dist(-5, 5);
  IntVector z(D.cols());
  for (auto& v : z) v = dist(rng);
  IntVector out = D * z;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[i];
  return out;
}

std::vector<Prepared> seeded_fixtures(std::size_t count, std::size_t n, std::uint64_t seed0) {
  std::vector<Prepared> out;
  for (std::uint64_t s = seed0; s < seed0 + count; ++s) out.push_back(prepare(generate_instance(n, s).system));
  return out;
}

}  // namespace

TEST(Reduce, ToyPipeline) {
  const Prepared p = toy();
  const IntVector r = reduce(p.xb, p.kd.D);
  EXPECT_TRUE(p.sys.satisfied_by(r));
  EXPECT_EQ(r, make_int_vector({0, 1, -1}));
  EXPECT_TRUE(differs_by_lattice_vector(p.kd.D, r, p.xb));

  const IntVector h = reduce_half(p.xb, p.kd.D);
  EXPECT_EQ(h, make_int_vector({1, 0, 1}));
}

TEST(Reduce, OrthogonalKernelLeavesNearestPointAlone) {
  // Orthogonal columns; x projects to 0 and 1/3, so every multiplier rounds to 0.
  const IntMatrix D{{2, 0}, {0, 3}, {0, 0}};
  const IntVector x = make_int_vector({0, 1, 5});
  EXPECT_EQ(reduce(x, D), x);
}

TEST(Reduce, DimensionMismatch) {
  const Prepared p = toy();
  try {
    reduce(make_int_vector({1, 2}), p.kd.D);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(reduce_half(make_int_vector({1, 2, 3, 4}), p.kd.D), Error);
}

TEST(Reduce, OutputsSolveTheSystemAndStayInCoset) {
  for (const Prepared& p : seeded_fixtures(10, 14, 500)) {
    for (const IntVector& r : {reduce(p.xb, p.kd.D), reduce_half(p.xb, p.kd.D)}) {
      EXPECT_TRUE(p.sys.satisfied_by(r));
      EXPECT_TRUE(differs_by_lattice_vector(p.kd.D, r, p.xb));
    }
  }
}

TEST(Reduce, InvariantUnderKernelShifts) {
  std::mt19937_64 rng(11);
  auto fixtures = seeded_fixtures(5, 12, 700);
  fixtures.push_back(toy());
  for (const Prepared& p : fixtures) {
    const IntVector r = reduce(p.xb, p.kd.D), h = reduce_half(p.xb, p.kd.D);
    for (int i = 0; i < 50; ++i) {
      const IntVector y = shifted(p.kd.D, p.xb, rng);
      ASSERT_EQ(reduce(y, p.kd.D), r);
      ASSERT_EQ(reduce_half(y, p.kd.D), h);
    }
  }
}

TEST(Reduce, InvariantUnderColumnSignsWithSymmetricTies) {
  std::vector<Prepared> fixtures{toy()};
  // Small kernels (s <= 4) so every sign pattern is enumerated.
  for (std::uint64_t s = 900; s < 904; ++s) {
    fixtures.push_back(prepare(generate_instance(4, s).system));
    fixtures.push_back(prepare(generate_system(2, 6, s).system));
  }
  for (const Prepared& p : fixtures) {
    const std::size_t s = p.kd.D.cols();
    ASSERT_LE(s, 4u);
    const auto mode = RoundingMode::HalfTowardZero;
    const IntVector r = reduce(p.xb, p.kd.D, mode), h = reduce_half(p.xb, p.kd.D, mode);
    for (unsigned mask = 1; mask < (1u << s); ++mask) {
      IntMatrix d = p.kd.D;
      for (std::size_t j = 0; j < s; ++j)
        if (mask >> j & 1)
          for (std::size_t i = 0; i < d.rows(); ++i) d(i, j) = -d(i, j);
      EXPECT_EQ(reduce(p.xb, d, mode), r);
      EXPECT_EQ(reduce_half(p.xb, d, mode), h);
    }
  }
}

TEST(Reduce, HalfVariantParity) {
  // reduce_half divides by two internally; odd entries of G_last + 1 would throw or truncate.
  for (const Prepared& p : seeded_fixtures(5, 10, 1200)) {
    const IntVector h = reduce_half(p.xb, p.kd.D);
    EXPECT_TRUE(p.sys.satisfied_by(h));
  }
}

TEST(Reduce, MatchesAhlExtraction) {
  std::size_t compared = 0, equal = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LdeSystem sys = generate_instance(12, seed).system;
    const Prepared p = prepare(sys);
    const AttackVerdict ahl = attack_ahl(sys);
    if (ahl.x.empty()) continue;
    ++compared;
    equal += reduce(p.xb, p.kd.D) == ahl.x;
  }
  RecordProperty("compared", static_cast<int>(compared));
  RecordProperty("equal", static_cast<int>(equal));
  EXPECT_GT(compared, 0u);
  EXPECT_EQ(equal, compared);
}
