#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "knapcrack/analysis.hpp"
#include "knapcrack/error.hpp"
#include "knapcrack/io.hpp"
#include "knapcrack/pipeline.hpp"
#include "support/oracles.hpp"

using namespace knapcrack;

namespace {

// Kernel bases of the three Example 3 scenarios (1/63 + 22/51, 3/63 + 36/51, 3/63 + 49/51).
const IntMatrix kScenarioA{{-1, 1, 0, -5}, {0, -1, -9, 5}, {-1, 4, -3, 5}, {1, 1, 5, 2},
                           {-2, -8, 4, 4}, {1, -4, -1, 0}, {1, -1, 0, 5},  {1, -4, 3, 5}};
const IntMatrix kScenarioB{{-1, -2, -6, -6}, {0, 1, -4, 5}, {-1, -5, 1, 4}, {1, 0, 8, 3},
                           {-2, 6, 6, 2},    {1, 5, 0, 1},  {0, 1, 1, 6},   {0, 2, 0, 5}};
const IntMatrix kScenarioC{{1, -3, -5, -7}, {0, 1, -5, 5}, {1, -6, 5, 3}, {-1, 1, 9, 4},
                           {2, 4, -2, 0},   {-1, 6, -4, 2}, {0, 1, 0, 6},  {2, 1, 2, 4}};

IntMatrix random_full_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  while (true) {
    IntMatrix d(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) d(i, j) = dist(rng);
    if (rank(d) == cols) return d;
  }
}

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& s) {
  Eigen::MatrixXd m(s.size(), s.front().size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s[i].size(); ++j) m(i, j) = s[i][j];
  return m;
}

Eigen::MatrixXd gram_double(const IntMatrix& d) {
  const IntMatrix g = gram(d);
  Eigen::MatrixXd out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out(i, j) = g(i, j).get_d();
  return out;
}

// Columns of D equal columns of E up to sign, in the same order.
bool equal_up_to_column_signs(const IntMatrix& d, const IntMatrix& e) {
  if (d.rows() != e.rows() || d.cols() != e.cols()) return false;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    IntVector col = d.column(j), neg = col;
    for (auto& v : neg) v = -v;
    if (col != e.column(j) && neg != e.column(j)) return false;
  }
  return true;
}

LdeSystem example3() {
  return LdeSystem(IntMatrix{{63, 9, 34, 46, 2, 55}, {51, 19, 12, 44, 3, 25}}, make_int_vector({99, 66}));
}

}  // namespace

TEST(Volume, Examples) {
  EXPECT_DOUBLE_EQ(lattice_volume(IntMatrix::identity(2)), 1.0);
  EXPECT_EQ(determinant(gram(kScenarioA)), 16911450);
  EXPECT_EQ(std::floor(lattice_volume(kScenarioA)), 4112);
  EXPECT_EQ(std::floor(lattice_volume(kScenarioB)), 3621);
  EXPECT_EQ(std::floor(lattice_volume(kScenarioC)), 4493);
  EXPECT_THROW(lattice_volume(IntMatrix{{1, 2}, {2, 4}}), Error);
}

TEST(Projection, PreservesGram) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix d = random_full_rank(rng, 6, 3, 9);
    const Eigen::MatrixXd s = to_eigen(project_preserving_gram(d));
    ASSERT_EQ(s.rows(), 3);
    const Eigen::MatrixXd g = gram_double(d);
    EXPECT_LE((s.transpose() * s - g).norm(), 1e-9 * g.norm());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double cos_s = s.col(i).dot(s.col(j)) / (s.col(i).norm() * s.col(j).norm());
        const double cos_d = g(i, j) / std::sqrt(g(i, i) * g(j, j));
        EXPECT_NEAR(cos_s, cos_d, 1e-9);
      }
  }
  const Eigen::MatrixXd orth = to_eigen(project_preserving_gram(IntMatrix{{2, 0}, {0, 3}, {0, 0}}));
  EXPECT_NEAR(orth.col(0).norm(), 2.0, 1e-12);
  EXPECT_NEAR(orth.col(1).norm(), 3.0, 1e-12);
}

TEST(Ellipsoid, UnitSquare) {
  const Ellipsoid e = min_volume_ellipsoid(IntMatrix::identity(2));
  ASSERT_EQ(e.semi_axes.size(), 2u);
  EXPECT_NEAR(e.semi_axes[0], std::sqrt(2.0) / 2, 1e-12);
  EXPECT_NEAR(e.semi_axes[1], std::sqrt(2.0) / 2, 1e-12);
  EXPECT_NEAR(e.volume, std::numbers::pi / 2, 1e-12);
  EXPECT_EQ(e.center, (std::vector<double>{0.5, 0.5}));
}

TEST(Ellipsoid, ScenarioAxes) {
  const std::vector<double> a{13.4214, 12.6793, 7.8505, 3.0782};
  const std::vector<double> c{15.1941, 12.4433, 7.1633, 3.3181};
  const Ellipsoid ea = min_volume_ellipsoid(kScenarioA), ec = min_volume_ellipsoid(kScenarioC);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(ea.semi_axes[i], a[i], 1e-2);
    EXPECT_NEAR(ec.semi_axes[i], c[i], 1e-2);
  }
  EXPECT_NEAR(ea.volume, 20294, 20294 * 0.005);
  EXPECT_NEAR(ec.volume, 22176, 22176 * 0.005);
}

TEST(Ellipsoid, MatchesKhachiyanOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t s = 2 + trial % 3;
    const IntMatrix d = random_full_rank(rng, s + 2, s, 6);
    const Eigen::MatrixXd proj = to_eigen(project_preserving_gram(d));
    Eigen::MatrixXd pts(s, 1 << s);
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
      Eigen::VectorXd z(s);
      for (std::size_t j = 0; j < s; ++j) z(j) = (mask >> j) & 1;
      pts.col(mask) = proj * z;
    }
    const auto expected = oracle::khachiyan_semi_axes(pts, 1e-12);
    const auto got = min_volume_ellipsoid(d).semi_axes;
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < s; ++i) EXPECT_NEAR(got[i], expected[i], 1e-3 * expected[i]);
  }
}

TEST(Gamma, TableValues) {
  const std::vector<std::pair<std::size_t, double>> table{{2, 1.5708}, {3, 2.7207}, {4, 4.9348},
                                                          {5, 9.1955}, {6, 17.4410}, {7, 33.4976}};
  for (const auto& [s, v] : table) EXPECT_NEAR(knapcrack::gamma(s), v, 1e-3) << "s=" << s;
  EXPECT_THROW(knapcrack::gamma(0), Error);
}

TEST(Gamma, IdentityOnRandomKernels) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 1 + trial % 6;
    const IntMatrix d = random_full_rank(rng, s + 3, s, 20);
    const double expected = knapcrack::gamma(s) * lattice_volume(d);
    const Ellipsoid e = min_volume_ellipsoid(d);
    EXPECT_NEAR(e.volume, expected, 1e-6 * expected);
    for (std::size_t i = 1; i < e.semi_axes.size(); ++i) EXPECT_GE(e.semi_axes[i - 1], e.semi_axes[i]);
  }
}

TEST(LambdaTilde, Examples) {
  EXPECT_NEAR(lambda_tilde(IntMatrix{{2, 0}, {0, 7}}), 1.0, 1e-12);
  // (1,0) and (1,0.05) scaled by 20 to stay integral.
  EXPECT_GT(lambda_tilde(IntMatrix{{20, 20}, {0, 1}}), 10.0);
  const double la = lambda_tilde(kScenarioA);
  EXPECT_TRUE(std::isfinite(la));
  EXPECT_GT(la, 1.0);
}

TEST(RectDistance, Examples) {
  EXPECT_EQ(rect_distance(IntMatrix{{2, 0}, {0, 3}}), 0.0);
  const IntMatrix d{{1, 1}, {0, 1}};
  EXPECT_NEAR(rect_distance(d), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(rect_distance_normalized(d), 1.0, 1e-12);
  EXPECT_EQ(rect_distance_normalized(IntMatrix{{2, 0}, {0, 3}}), 0.0);
  EXPECT_NEAR(rect_distance_normalized(IntMatrix{{5, 1}, {0, 1}}), rect_distance_normalized(d), 1e-12);
}

TEST(RectDistance, PermutationAndSignInvariant) {
  const double base = rect_distance(kScenarioA);
  IntMatrix flipped = kScenarioA;
  for (std::size_t i = 0; i < flipped.rows(); ++i) {
    flipped(i, 1) = -flipped(i, 1);
    std::swap(flipped(i, 0), flipped(i, 3));
  }
  EXPECT_DOUBLE_EQ(rect_distance(flipped), base);
  EXPECT_DOUBLE_EQ(rect_distance_normalized(flipped), rect_distance_normalized(kScenarioA));
}

TEST(KernelBases, PipelineReproducesScenarioBases) {
  // NTL's default reduction parameter 3/4 is the one that reproduces these bases.
  const Rational alpha(3, 4);
  const std::vector<std::tuple<long, long, IntMatrix>> cases{
      {1, 22, kScenarioA}, {3, 36, kScenarioB}, {3, 49, kScenarioC}};
  for (const auto& [t1, t2, expected] : cases) {
    const LdeSystem aug =
        apply_scenario(example3(), {{0, DisaggParams(t1, 63)}, {1, DisaggParams(t2, 51)}});
    const KernelDecomposition kd = decompose(aug, default_big_n(), alpha);
    EXPECT_TRUE(equal_up_to_column_signs(kd.D, expected)) << t1 << "/63 " << t2 << "/51";
  }
}

TEST(Features, CsvExport) {
  EXPECT_EQ(features_csv({}), features_csv({}));
  const std::string empty = features_csv({});
  EXPECT_EQ(std::count(empty.begin(), empty.end(), '\n'), 1);
  EXPECT_EQ(empty.rfind("instance_id,m,n,t,M,kernel_dim,volume,mve_volume,gamma_check,", 0), 0u);

  std::vector<FeatureRecord> records;
  const std::vector<std::tuple<std::string, IntMatrix, double>> scen{
      {"1;22", kScenarioA, 4112}, {"3;36", kScenarioB, 3621}, {"3;49", kScenarioC, 4493}};
  for (const auto& [t, d, vol] : scen) {
    FeatureRecord r{"ex3", 2, 6, t, "63;51", kernel_features(d)};
    EXPECT_EQ(std::floor(r.features.volume), vol);
    EXPECT_NEAR(r.features.mve_volume / (knapcrack::gamma(4) * r.features.volume), 1.0, 1e-6);
    records.push_back(r);
  }
  records.push_back({"small, \"quoted\"", 1, 3, "1", "2", kernel_features(IntMatrix{{1, 1}, {0, 1}, {0, 0}})});
  const std::string csv = features_csv(records);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("\"small, \"\"quoted\"\"\""), std::string::npos);
  EXPECT_NE(csv.find(",ax4,"), std::string::npos);
  // The two-dimensional row pads ax3 and ax4 with empty fields.
  const std::string last = csv.substr(csv.rfind("\"small"));
  EXPECT_NE(last.find(",,"), std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "knapcrack_features_test.csv";
  export_features_csv(records, path.string());
  EXPECT_EQ(read_text_file(path.string()), csv);
  std::filesystem::remove(path);
  EXPECT_THROW(export_features_csv(records, "/nonexistent-dir/x.csv"), Error);
}
