#include "knapcrack/reduce.hpp"

#include "knapcrack/error.hpp"

namespace knapcrack {

namespace {

IntVector sweep(IntVector target, const IntMatrix& basis, RoundingMode mode) {
  if (target.size() != basis.rows())
    throw Error(ErrorCode::DimensionMismatch, "target length differs from kernel basis dimension");
  const std::size_t s = basis.cols();
  if (s == 0) return target;
  const LatticeBasis cols = LatticeBasis::from_matrix(basis);
  const GsoResult g = gso(cols);
  // The target may lie in span(D) (b = 0), so its coefficients are taken
  // against b* directly instead of orthogonalizing (D | target).
  RatVector coef(s);
  for (std::size_t j = 0; j < s; ++j)
    coef[j] = dot(std::span<const Integer>(target), std::span<const Rational>(g.bstar[j])) / g.sqnorm[j];
  for (std::size_t j = s; j-- > 0;) {
    const Integer lambda = nearest_integer(coef[j], mode);
    if (sgn(lambda) == 0) continue;
    for (std::size_t r = 0; r < target.size(); ++r)
      mpz_submul(target[r].get_mpz_t(), lambda.get_mpz_t(), cols[j][r].get_mpz_t());
    for (std::size_t i = 0; i < j; ++i) coef[i] -= lambda * g.mu[j][i];
    coef[j] -= lambda;
  }
  return target;
}

}  // namespace

IntVector reduce(std::span<const Integer> x_b, const IntMatrix& D, RoundingMode mode) {
  return sweep(IntVector(x_b.begin(), x_b.end()), D, mode);
}

IntVector reduce_half(std::span<const Integer> x_b, const IntMatrix& D, RoundingMode mode) {
  IntMatrix doubled = D;
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j) doubled(i, j) *= 2;
  IntVector shifted(x_b.size());
  for (std::size_t i = 0; i < x_b.size(); ++i) shifted[i] = 2 * x_b[i] - 1;
  IntVector out = sweep(std::move(shifted), doubled, mode);
  for (auto& v : out) {
    v += 1;
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 2);
  }
  return out;
}

}  // namespace knapcrack
