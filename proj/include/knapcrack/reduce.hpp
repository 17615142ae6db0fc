#pragma once

#include "knapcrack/integer.hpp"
#include "knapcrack/lattice.hpp"
#include "knapcrack/matrix.hpp"

namespace knapcrack {

// Shortens the particular solution x_b by the kernel basis D (columns), sweeping
// the last kernel vector first and subtracting the nearest-integer multiple of
// each. The result differs from x_b by a lattice vector of D.
IntVector reduce(std::span<const Integer> x_b, const IntMatrix& D, RoundingMode mode = RoundingMode::HalfDown);

// Same sweep on (2D | 2x_b - 1); returns (result + 1) / 2, which recentres the
// search on the cube {0,1}^n.
IntVector reduce_half(std::span<const Integer> x_b, const IntMatrix& D, RoundingMode mode = RoundingMode::HalfDown);

}  // namespace knapcrack
