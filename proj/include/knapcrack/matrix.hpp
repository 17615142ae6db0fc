#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "knapcrack/integer.hpp"

namespace knapcrack {

// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix from_columns(const std::vector<IntVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  std::vector<IntVector> columns() const;

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  IntVector operator*(std::span<const Integer> x) const;

  bool operator==(const IntMatrix& rhs) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// Exact routines over Q; all fraction-free or rational, never floating point.
std::size_t rank(const IntMatrix& a);
Integer determinant(const IntMatrix& a);
// Unique rational x with a*x = b for full-column-rank a, or nullopt when the
// system is inconsistent. Throws RankDeficient if a lacks full column rank.
std::optional<RatVector> solve_exact(const IntMatrix& a, std::span<const Integer> b);

// Gram matrix D^T D.
IntMatrix gram(const IntMatrix& d);

}  // namespace knapcrack
