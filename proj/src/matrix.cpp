#include "knapcrack/matrix.hpp"

#include <utility>

#include "knapcrack/error.hpp"

namespace knapcrack {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns) {
  if (columns.empty()) return {};
  IntMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != m.rows_) throw Error(ErrorCode::DimensionMismatch, "ragged columns");
    for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<IntVector> IntMatrix::columns() const {
  std::vector<IntVector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        mpz_addmul(out(i, j).get_mpz_t(), a.get_mpz_t(), rhs(k, j).get_mpz_t());
    }
  return out;
}

IntVector IntMatrix::operator*(std::span<const Integer> x) const {
  if (cols_ != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shapes");
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      mpz_addmul(out[i].get_mpz_t(), (*this)(i, k).get_mpz_t(), x[k].get_mpz_t());
  return out;
}

namespace {

// Bareiss fraction-free elimination in place; returns the rank and leaves the
// last pivot as the determinant for square full-rank input (up to `sign`).
std::size_t bareiss(IntMatrix& m, int& sign) {
  sign = 1;
  const std::size_t rows = m.rows(), cols = m.cols();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && sgn(m(pivot, c)) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pivot, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer v = m(i, j) * m(r, c) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  int sign = 1;
  return bareiss(m, sign);
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  if (a.rows() == 0) return 1;
  IntMatrix m = a;
  int sign = 1;
  const std::size_t r = bareiss(m, sign);
  if (r < a.rows()) return 0;
  return sign * m(a.rows() - 1, a.cols() - 1);
}

std::optional<RatVector> solve_exact(const IntMatrix& a, std::span<const Integer> b) {
  const std::size_t rows = a.rows(), cols = a.cols();
  if (b.size() != rows) throw Error(ErrorCode::DimensionMismatch, "rhs length differs from row count");
  std::vector<RatVector> aug(rows, RatVector(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a(i, j);
    aug[i][cols] = b[i];
  }
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(aug[p][c]) == 0) ++p;
    if (p == rows) throw Error(ErrorCode::RankDeficient, "matrix lacks full column rank");
    std::swap(aug[p], aug[r]);
    const Rational inv = 1 / aug[r][c];
    for (std::size_t j = c; j <= cols; ++j) aug[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(aug[i][c]) == 0) continue;
      const Rational f = aug[i][c];
      for (std::size_t j = c; j <= cols; ++j) aug[i][j] -= f * aug[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (sgn(aug[i][cols]) != 0) return std::nullopt;
  RatVector x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = aug[i][cols];
  return x;
}

IntMatrix gram(const IntMatrix& d) { return d.transpose() * d; }

}  // namespace knapcrack
