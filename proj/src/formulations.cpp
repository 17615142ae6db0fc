#include "knapcrack/formulations.hpp"

#include <cmath>
#include <utility>

#include "knapcrack/error.hpp"

namespace knapcrack {

LdeSystem::LdeSystem(IntMatrix a, IntVector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() < 1) throw Error(ErrorCode::InvalidInstance, "system needs at least one equation");
  if (a_.cols() < 2) throw Error(ErrorCode::InvalidInstance, "system needs at least two unknowns");
  if (a_.rows() >= a_.cols()) throw Error(ErrorCode::InvalidInstance, "system needs fewer equations than unknowns");
  if (b_.size() != a_.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from row count");
  if (rank(a_) != a_.rows()) throw Error(ErrorCode::RankDeficient, "coefficient matrix lacks full row rank");
}

bool LdeSystem::satisfied_by(std::span<const Integer> x) const {
  if (x.size() != n()) return false;
  return a_ * x == b_;
}

SubsetSumInstance::SubsetSumInstance(IntVector a, Integer b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() < 2) throw Error(ErrorCode::InvalidInstance, "instance needs at least two weights");
  for (const auto& v : a_)
    if (sgn(v) <= 0) throw Error(ErrorCode::InvalidInstance, "weights must be positive");
  if (b_ < 1 || b_ > total() - 1)
    throw Error(ErrorCode::InvalidInstance, "target must lie in [1, sum(a) - 1], got " + b_.get_str());
}

bool SubsetSumInstance::is_normalized() const { return max_element(a_) < b_ && 2 * b_ <= total(); }

LdeSystem SubsetSumInstance::to_system() const {
  IntMatrix row(1, a_.size());
  for (std::size_t j = 0; j < a_.size(); ++j) row(0, j) = a_[j];
  return LdeSystem(row, IntVector{b_});
}

Complement complement(const SubsetSumInstance& inst) {
  SubsetSumInstance flipped(inst.a(), inst.complement_rhs());
  std::vector<bool> fixable(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) fixable[i] = inst.a()[i] > flipped.b();
  return {std::move(flipped), std::move(fixable)};
}

IntVector flip(std::span<const Integer> y) {
  IntVector x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = 1 - y[i];
  return x;
}

double density(const SubsetSumInstance& inst) {
  const Integer mx = max_element(inst.a());
  // log2 through mpz keeps precision for huge weights.
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, mx.get_mpz_t());
  const double log2max = std::log2(mantissa) + static_cast<double>(exponent);
  return static_cast<double>(inst.n()) / log2max;
}

LatticeBasis build_lattice_B(const LdeSystem& sys, const Integer& big_n) {
  if (big_n < 1) throw Error(ErrorCode::InvalidN, "N must be positive");
  const std::size_t m = sys.m(), n = sys.n();
  std::vector<IntVector> cols(n, IntVector(n + m));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j][j] = 1;
    for (std::size_t i = 0; i < m; ++i) cols[j][n + i] = big_n * sys.A()(i, j);
  }
  return LatticeBasis(std::move(cols));
}

KernelDecomposition decompose(const LdeSystem& sys, const Integer& big_n, const Rational& alpha) {
  const std::size_t m = sys.m(), n = sys.n();
  Integer current = big_n;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    const LatticeBasis reduced = lll(build_lattice_B(sys, current), alpha);
    bool separated = true;
    for (std::size_t j = 0; j < n - m && separated; ++j)
      for (std::size_t i = n; i < n + m; ++i)
        if (sgn(reduced[j][i]) != 0) {
          separated = false;
          break;
        }
    if (separated) {
      KernelDecomposition kd{IntMatrix(n, n - m), IntMatrix(n, m), IntMatrix(m, m), current};
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          if (j < n - m) kd.D(i, j) = reduced[j][i];
          else kd.C(i, j - (n - m)) = reduced[j][i];
        }
      kd.E = sys.A() * kd.C;
      if (m == 1 && sgn(kd.E(0, 0)) < 0) {
        kd.E(0, 0) = -kd.E(0, 0);
        for (std::size_t i = 0; i < n; ++i) kd.C(i, 0) = -kd.C(i, 0);
      }
      return kd;
    }
    current *= current;
  }
  throw Error(ErrorCode::EscalationExhausted, "kernel block did not separate after 4 escalations of N");
}

std::optional<IntVector> special_solution(const KernelDecomposition& kd, std::span<const Integer> b) {
  if (b.size() != kd.E.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from E");
  if (determinant(kd.E) == 0) throw Error(ErrorCode::SingularE, "E is singular");
  const auto y = solve_exact(kd.E, b);
  IntVector z(y->size());
  for (std::size_t i = 0; i < y->size(); ++i) {
    if ((*y)[i].get_den() != 1) return std::nullopt;
    z[i] = (*y)[i].get_num();
  }
  return kd.C * std::span<const Integer>(z);
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::BinarySolution: return "BinarySolution";
    case VerdictStatus::ShortNonBinary: return "ShortNonBinary";
    case VerdictStatus::NoIntegerSolution: return "NoIntegerSolution";
    case VerdictStatus::Failure: return "Failure";
  }
  return "Failure";
}

VerdictStatus parse_verdict_status(std::string_view text) {
  for (auto s : {VerdictStatus::BinarySolution, VerdictStatus::ShortNonBinary, VerdictStatus::NoIntegerSolution,
                 VerdictStatus::Failure})
    if (to_string(s) == text) return s;
  throw Error(ErrorCode::ParseError, "unknown verdict status '" + std::string(text) + "'");
}

AttackVerdict AttackVerdict::from_solution(const LdeSystem& sys, IntVector x, std::string algorithm) {
  if (!sys.satisfied_by(x)) throw Error(ErrorCode::NotASolution, format_vector(x) + " does not satisfy the system");
  AttackVerdict v;
  v.status = is_binary(x) ? VerdictStatus::BinarySolution : VerdictStatus::ShortNonBinary;
  v.x = std::move(x);
  v.algorithm = std::move(algorithm);
  return v;
}

AttackVerdict AttackVerdict::failure(std::string algorithm) {
  AttackVerdict v;
  v.algorithm = std::move(algorithm);
  return v;
}

AttackVerdict AttackVerdict::no_integer_solution(std::string algorithm) {
  AttackVerdict v;
  v.status = VerdictStatus::NoIntegerSolution;
  v.algorithm = std::move(algorithm);
  return v;
}

namespace {

bool tail_is_zero(const IntVector& col, std::size_t from) {
  for (std::size_t i = from; i < col.size(); ++i)
    if (sgn(col[i]) != 0) return false;
  return true;
}

// Retry a subset-sum attack on the complementary instance when the direct
// run finds no binary solution.
template <typename Attack>
AttackVerdict with_complement(const SubsetSumInstance& inst, Attack attack) {
  AttackVerdict direct = attack(inst.to_system());
  if (direct.solved()) return direct;
  const Complement comp = complement(inst);
  AttackVerdict flipped = attack(comp.instance.to_system());
  if (!flipped.solved()) return direct;
  AttackVerdict v = AttackVerdict::from_solution(inst.to_system(), flip(flipped.x), flipped.algorithm);
  v.witness_column = flipped.witness_column;
  v.lambda = flipped.lambda;
  v.complemented = true;
  return v;
}

}  // namespace

AttackVerdict attack_lo(const LdeSystem& sys, const Rational& alpha) {
  const std::size_t m = sys.m(), n = sys.n();
  std::vector<IntVector> cols(n + 1, IntVector(n + m));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j][j] = 1;
    for (std::size_t i = 0; i < m; ++i) cols[j][n + i] = -sys.A()(i, j);
  }
  for (std::size_t i = 0; i < m; ++i) cols[n][n + i] = sys.b()[i];
  const LatticeBasis reduced = lll(LatticeBasis(std::move(cols)), alpha);

  for (std::size_t c = 0; c < reduced.size(); ++c) {
    const IntVector& col = reduced[c];
    if (!tail_is_zero(col, n)) continue;
    // lambda is the common non-zero value; a sign flip just negates it.
    Integer lambda = 0;
    bool pattern = true;
    for (std::size_t i = 0; i < n && pattern; ++i) {
      if (sgn(col[i]) == 0) continue;
      if (sgn(lambda) == 0) lambda = col[i];
      else pattern = (col[i] == lambda);
    }
    if (!pattern || sgn(lambda) == 0) continue;
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sgn(col[i]) != 0 ? 1 : 0;
    if (!sys.satisfied_by(x)) continue;
    AttackVerdict v = AttackVerdict::from_solution(sys, std::move(x), "lo");
    v.witness_column = c;
    v.lambda = lambda;
    return v;
  }
  return AttackVerdict::failure("lo");
}

AttackVerdict attack_lo(const SubsetSumInstance& inst, const Rational& alpha) {
  return with_complement(inst, [&](const LdeSystem& s) { return attack_lo(s, alpha); });
}

AttackVerdict attack_cjloss(const LdeSystem& sys, const Integer& big_n, const Rational& alpha) {
  const std::size_t m = sys.m(), n = sys.n();
  if (sgn(big_n) <= 0 || 4 * big_n * big_n <= Integer(static_cast<unsigned long>(n)))
    throw Error(ErrorCode::InvalidN, "CJLOSS requires N > sqrt(n)/2");
  std::vector<IntVector> cols(n + 1, IntVector(n + m));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j][j] = 2;
    for (std::size_t i = 0; i < m; ++i) cols[j][n + i] = 2 * big_n * sys.A()(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) cols[n][i] = 1;
  for (std::size_t i = 0; i < m; ++i) cols[n][n + i] = 2 * big_n * sys.b()[i];
  const LatticeBasis reduced = lll(LatticeBasis(std::move(cols)), alpha);

  for (std::size_t c = 0; c < reduced.size(); ++c) {
    const IntVector& col = reduced[c];
    if (!tail_is_zero(col, n)) continue;
    bool pattern = true;
    for (std::size_t i = 0; i < n && pattern; ++i) pattern = (abs(col[i]) == 1);
    if (!pattern) continue;
    for (int sign : {1, -1}) {
      IntVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = (sign * col[i] + 1) / 2;
      if (!sys.satisfied_by(x)) continue;
      AttackVerdict v = AttackVerdict::from_solution(sys, std::move(x), "cjloss");
      v.witness_column = c;
      return v;
    }
  }
  return AttackVerdict::failure("cjloss");
}

AttackVerdict attack_cjloss(const SubsetSumInstance& inst, const Integer& big_n, const Rational& alpha) {
  return with_complement(inst, [&](const LdeSystem& s) { return attack_cjloss(s, big_n, alpha); });
}

Integer default_ahl_n2(std::size_t n, std::size_t m, const Integer& n1) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, n + m);
  return p * n1 * n1 + 1;
}

AttackVerdict attack_ahl(const LdeSystem& sys, const Integer& n1, const Integer& n2, const Rational& alpha) {
  const std::size_t m = sys.m(), n = sys.n();
  if (sgn(n1) <= 0) throw Error(ErrorCode::InvalidBigInts, "N1 must be positive");
  if (n2 <= default_ahl_n2(n, m, n1) - 1) throw Error(ErrorCode::InvalidBigInts, "N2 must exceed 2^(n+m) N1^2");
  std::vector<IntVector> cols(n + 1, IntVector(n + 1 + m));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j][j] = 1;
    for (std::size_t i = 0; i < m; ++i) cols[j][n + 1 + i] = n2 * sys.A()(i, j);
  }
  cols[n][n] = n1;
  for (std::size_t i = 0; i < m; ++i) cols[n][n + 1 + i] = -n2 * sys.b()[i];
  const LatticeBasis reduced = lll(LatticeBasis(std::move(cols)), alpha);

  const std::size_t c = n - m;
  const IntVector& col = reduced[c];
  if (abs(col[n]) != n1 || !tail_is_zero(col, n + 1)) return AttackVerdict::failure("ahl");
  IntVector x(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(n));
  if (sgn(col[n]) < 0)
    for (auto& v : x) v = -v;
  AttackVerdict v = AttackVerdict::from_solution(sys, std::move(x), "ahl");
  v.witness_column = c;
  return v;
}

AttackVerdict attack_ahl(const LdeSystem& sys, const Rational& alpha) {
  return attack_ahl(sys, default_ahl_n1(), default_ahl_n2(sys.n(), sys.m(), default_ahl_n1()), alpha);
}

}  // namespace knapcrack
