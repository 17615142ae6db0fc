#pragma once

#include <cstddef>
#include <vector>

#include "knapcrack/integer.hpp"
#include "knapcrack/matrix.hpp"

namespace knapcrack {

// Ordered integer basis stored as columns of a common dimension.
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(std::vector<IntVector> columns);
  static LatticeBasis from_matrix(const IntMatrix& m) { return LatticeBasis(m.columns()); }

  std::size_t size() const { return columns_.size(); }
  std::size_t dimension() const { return columns_.empty() ? 0 : columns_.front().size(); }

  const IntVector& operator[](std::size_t i) const { return columns_[i]; }
  IntVector& operator[](std::size_t i) { return columns_[i]; }
  const std::vector<IntVector>& columns() const { return columns_; }

  IntMatrix to_matrix() const { return IntMatrix::from_columns(columns_); }

  bool operator==(const LatticeBasis&) const = default;

 private:
  std::vector<IntVector> columns_;
};

// mu[i][j] is the coefficient of b*_j in b_i (zero above the diagonal, one on
// it), so that column i of B equals sum_j mu[i][j] * b*_j.
struct GsoResult {
  std::vector<RatVector> mu;
  std::vector<RatVector> bstar;
  RatVector sqnorm;  // |b*_i|^2

  std::size_t size() const { return sqnorm.size(); }
  bool operator==(const GsoResult&) const = default;
};

// Throws DependentColumns if some b*_i vanishes.
GsoResult gso(const LatticeBasis& basis);

enum class RoundingMode {
  HalfDown,        // ceil(q - 1/2): 9/2 -> 4, -9/2 -> -5
  HalfTowardZero,  // symmetric: 9/2 -> 4, -9/2 -> -4
};

Integer nearest_integer(const Rational& q, RoundingMode mode = RoundingMode::HalfDown);

// Indices are zero-based. Both updates use closed forms and never
// re-orthogonalize.
// GSO of the basis after b_k <- b_k - gamma * b_l, l < k.
GsoResult gso_after_reduce(const GsoResult& g, std::size_t k, std::size_t l, const Integer& gamma);
// GSO of the basis after exchanging b_{k-1} and b_k, k >= 1.
GsoResult gso_after_swap(const GsoResult& g, std::size_t k);

inline Rational default_alpha() { return Rational(99, 100); }

// LLL reduction with parameter 1/4 < alpha < 1. Throws InvalidAlpha or
// DependentColumns.
LatticeBasis lll(const LatticeBasis& basis, const Rational& alpha = default_alpha());

// Exact check of size reduction and the Lovasz condition.
bool is_lll_reduced(const LatticeBasis& basis, const Rational& alpha = default_alpha());

}  // namespace knapcrack
