#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knapcrack/formulations.hpp"
#include "knapcrack/integer.hpp"

namespace knapcrack {

// Ratio r = t/M with 0 < t < M.
class DisaggParams {
 public:
  DisaggParams(Integer t, Integer modulus);

  const Integer& t() const { return t_; }
  const Integer& modulus() const { return m_; }
  Rational ratio() const;

 private:
  Integer t_;
  Integer m_;
};

struct ModularImage {
  IntVector c;  // t a_i mod M
  Integer d;    // t b mod M
  IntVector v;  // floor(t a_i / M)
  Integer w;    // floor(t b / M)
  Integer u_k;  // bound on the slack k = w - v.x over binary solutions
  std::size_t n_k = 0;  // bits needed for k, ceil(log2(u_k + 1))
};

// Weights must be non-negative (zeros occur in augmented rows); the
// complementary target is sum(a) - b.
ModularImage modular_transform(std::span<const Integer> a, const Integer& b, const DisaggParams& p);

// b~ r + floor(b r) - sum floor(a_i r)
Rational g_value(std::span<const Integer> a, const Integer& b, const Rational& r);
Integer uk_bound(std::span<const Integer> a, const Integer& b, const Rational& r);

// sum(c) < M + d. Also evaluates g < 1 and u_k = 0 and throws
// std::logic_error should the three ever disagree.
bool is_ideal(std::span<const Integer> a, const Integer& b, const DisaggParams& p);

class DisaggregatedSystem {
 public:
  DisaggregatedSystem(LdeSystem base, std::size_t row_index, DisaggParams params, ModularImage image);

  const LdeSystem& base() const { return base_; }
  std::size_t row_index() const { return row_; }
  const DisaggParams& params() const { return params_; }
  const ModularImage& image() const { return image_; }
  std::size_t k_count() const { return image_.n_k; }
  // (v | 1, 2, ..., 2^(n_k - 1))
  const IntVector& extra_row() const { return extra_row_; }
  const Integer& extra_rhs() const { return image_.w; }

  // Base rows padded with n_k zero columns, then the extra row. Throws
  // RankDeficient when the extra row is dependent on the base rows.
  LdeSystem augmented() const;
  // "# t M row u_k n_k" header line for the text format.
  std::string header() const;

 private:
  LdeSystem base_;
  std::size_t row_;
  DisaggParams params_;
  ModularImage image_;
  IntVector extra_row_;
};

DisaggregatedSystem build_disaggregated(const LdeSystem& sys, std::size_t row_index, const DisaggParams& p);

enum class JumpSourceKind { Weight, Target, Complement };

struct JumpSource {
  JumpSourceKind kind;
  std::size_t index = 0;  // weight index for JumpSourceKind::Weight
  bool operator==(const JumpSource&) const = default;
};

std::string to_string(const JumpSource& s);

struct JumpPoint {
  Rational value;
  std::vector<JumpSource> sources;
};

inline constexpr std::uint64_t kDefaultJumpCap = 1000000;

// Sorted union of j/q, 1 <= j < q, over q in {a_i, b, b~}; equal values are
// merged with their sources. Without a limit, throws SizeLimit once more than
// `cap` distinct points would be produced.
std::vector<JumpPoint> enumerate_jump_points(const SubsetSumInstance& inst,
                                             std::optional<std::size_t> limit = std::nullopt,
                                             std::uint64_t cap = kDefaultJumpCap);

bool is_jump_point(const SubsetSumInstance& inst, const Rational& r);
// True when r1 < r2 are jump points with none strictly between them.
bool are_neighbours(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2);

// True when x~ (a solution of a.x = b) is excluded by the disaggregated
// equation at r: w - v.x~ falls outside [0, u_k]. Throws NotASolution.
bool cuts_off(const SubsetSumInstance& inst, const Rational& r, std::span<const Integer> x);

struct NjpDeltas {
  IntVector dv;
  Integer dw;
  Integer dw_tilde;
  Integer du_k;
};

// Throws NotNeighbours unless r1 < r2 are adjacent jump points.
NjpDeltas njp_deltas(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2);
// dw <= dv.x <= sum(dv) - dw~, under which a cut at r1 persists at r2.
bool njp_right_dominates(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2,
                         std::span<const Integer> x);
// sum(dv) - dw~ <= dv.x <= dw, under which a cut at r2 persists at r1.
bool njp_left_dominates(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2,
                        std::span<const Integer> x);

}  // namespace knapcrack
