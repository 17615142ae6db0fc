#include "knapcrack/lattice.hpp"

#include <utility>

#include "knapcrack/error.hpp"

namespace knapcrack {

LatticeBasis::LatticeBasis(std::vector<IntVector> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) return;
  const std::size_t dim = columns_.front().size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "basis columns must be non-empty");
  for (const auto& c : columns_)
    if (c.size() != dim) throw Error(ErrorCode::DimensionMismatch, "basis columns differ in dimension");
  if (columns_.size() > dim)
    throw Error(ErrorCode::DependentColumns, "more columns than the ambient dimension");
}

GsoResult gso(const LatticeBasis& basis) {
  const std::size_t n = basis.size(), dim = basis.dimension();
  GsoResult g;
  g.mu.assign(n, RatVector(n));
  g.bstar.assign(n, RatVector(dim));
  g.sqnorm.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    RatVector& bs = g.bstar[i];
    for (std::size_t r = 0; r < dim; ++r) bs[r] = basis[i][r];
    for (std::size_t j = 0; j < i; ++j) {
      const Rational m = dot(std::span<const Integer>(basis[i]), std::span<const Rational>(g.bstar[j])) / g.sqnorm[j];
      g.mu[i][j] = m;
      if (sgn(m) == 0) continue;
      for (std::size_t r = 0; r < dim; ++r) bs[r] -= m * g.bstar[j][r];
    }
    g.mu[i][i] = 1;
    g.sqnorm[i] = dot(std::span<const Rational>(bs), std::span<const Rational>(bs));
    if (sgn(g.sqnorm[i]) == 0)
      throw Error(ErrorCode::DependentColumns, "column " + std::to_string(i) + " lies in the span of earlier columns");
  }
  return g;
}

Integer nearest_integer(const Rational& q, RoundingMode mode) {
  // ceil((2p - d) / 2d) == ceil(q - 1/2)
  auto half_down = [](const Integer& p, const Integer& d) {
    Integer num = 2 * p - d, den = 2 * d, z;
    mpz_cdiv_q(z.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return z;
  };
  const Integer p = q.get_num(), d = q.get_den();
  if (mode == RoundingMode::HalfTowardZero && sgn(p) < 0) return -half_down(-p, d);
  return half_down(p, d);
}

namespace {

void reduce_mu(std::vector<RatVector>& mu, std::size_t k, std::size_t l, const Rational& gamma) {
  for (std::size_t j = 0; j < l; ++j)
    if (sgn(mu[l][j]) != 0) mu[k][j] -= gamma * mu[l][j];
  mu[k][l] -= gamma;
}

// Exchange-lemma update of mu and |b*|^2; returns (sq[k]/B, sq[k-1]/B, mu) for
// callers that also carry the b* vectors.
struct SwapCoefficients {
  Rational mu, ratio_k, ratio_k1;
};

SwapCoefficients swap_mu(std::vector<RatVector>& mu, RatVector& sq, std::size_t k) {
  const std::size_t n = sq.size();
  const Rational m = mu[k][k - 1];
  const Rational sk = sq[k], sk1 = sq[k - 1];
  const Rational big = sk + m * m * sk1;
  if (sgn(big) == 0) throw Error(ErrorCode::DependentColumns, "zero Gram-Schmidt vector after exchange");
  SwapCoefficients out{m, sk / big, sk1 / big};

  for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k - 1][j], mu[k][j]);
  for (std::size_t i = k + 1; i < n; ++i) {
    const Rational a = mu[i][k - 1], b = mu[i][k];
    mu[i][k - 1] = b * out.ratio_k + a * m * out.ratio_k1;
    mu[i][k] = a - b * m;
  }
  mu[k][k - 1] = m * out.ratio_k1;
  sq[k - 1] = big;
  sq[k] = sk * out.ratio_k1;
  return out;
}

void check_index(std::size_t n, std::size_t k) {
  if (k >= n) throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(k) + " outside basis of size " + std::to_string(n));
}

bool exceeds_half(const Rational& q) {
  // |q| > 1/2  <=>  2|p| > d
  Integer p = abs(q.get_num());
  return 2 * p > q.get_den();
}

void column_submul(IntVector& target, const IntVector& source, const Integer& gamma) {
  for (std::size_t r = 0; r < target.size(); ++r)
    mpz_submul(target[r].get_mpz_t(), gamma.get_mpz_t(), source[r].get_mpz_t());
}

}  // namespace

GsoResult gso_after_reduce(const GsoResult& g, std::size_t k, std::size_t l, const Integer& gamma) {
  check_index(g.size(), k);
  if (l >= k) throw Error(ErrorCode::IndexOutOfRange, "reduce requires l < k");
  GsoResult out = g;
  if (sgn(gamma) != 0) reduce_mu(out.mu, k, l, Rational(gamma));
  return out;
}

GsoResult gso_after_swap(const GsoResult& g, std::size_t k) {
  check_index(g.size(), k);
  if (k == 0) throw Error(ErrorCode::IndexOutOfRange, "swap requires k >= 1");
  GsoResult out = g;
  const SwapCoefficients c = swap_mu(out.mu, out.sqnorm, k);
  const RatVector& old_k1 = g.bstar[k - 1];
  const RatVector& old_k = g.bstar[k];
  for (std::size_t r = 0; r < old_k.size(); ++r) {
    out.bstar[k - 1][r] = old_k[r] + c.mu * old_k1[r];
    out.bstar[k][r] = c.ratio_k * old_k1[r] - c.mu * c.ratio_k1 * old_k[r];
  }
  return out;
}

namespace {

void check_alpha(const Rational& alpha) {
  if (!(alpha > Rational(1, 4) && alpha < 1))
    throw Error(ErrorCode::InvalidAlpha, "alpha must satisfy 1/4 < alpha < 1, got " + alpha.get_str());
}

}  // namespace

LatticeBasis lll(const LatticeBasis& basis, const Rational& alpha) {
  check_alpha(alpha);
  LatticeBasis b = basis;
  const std::size_t n = b.size();
  if (n <= 1) {
    if (n == 1 && is_zero(b[0])) throw Error(ErrorCode::DependentColumns, "zero basis vector");
    return b;
  }
  // Only mu and |b*|^2 are needed to drive the reduction.
  GsoResult g = gso(b);
  std::vector<RatVector>& mu = g.mu;
  RatVector& sq = g.sqnorm;

  auto size_reduce = [&](std::size_t k, std::size_t l) {
    if (!exceeds_half(mu[k][l])) return;
    const Integer gamma = nearest_integer(mu[k][l]);
    column_submul(b[k], b[l], gamma);
    reduce_mu(mu, k, l, Rational(gamma));
  };

  std::size_t k = 1;
  while (k < n) {
    size_reduce(k, k - 1);
    const Rational& m = mu[k][k - 1];
    if (sq[k] + m * m * sq[k - 1] < alpha * sq[k - 1]) {
      std::swap(b[k - 1], b[k]);
      swap_mu(mu, sq, k);
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
      ++k;
    }
  }
  return b;
}

bool is_lll_reduced(const LatticeBasis& basis, const Rational& alpha) {
  check_alpha(alpha);
  const GsoResult g = gso(basis);
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (exceeds_half(g.mu[i][j])) return false;
  for (std::size_t i = 1; i < n; ++i) {
    const Rational& m = g.mu[i][i - 1];
    if (g.sqnorm[i] + m * m * g.sqnorm[i - 1] < alpha * g.sqnorm[i - 1]) return false;
  }
  return true;
}

}  // namespace knapcrack
