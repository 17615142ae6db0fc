#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knapcrack/integer.hpp"
#include "knapcrack/lattice.hpp"
#include "knapcrack/matrix.hpp"

namespace knapcrack {

// A x = b over unknown x. Entries may be any integers (augmented systems
// carry zeros); construction checks m >= 1, n >= 2, m < n and full row rank.
class LdeSystem {
 public:
  LdeSystem(IntMatrix a, IntVector b);

  const IntMatrix& A() const { return a_; }
  const IntVector& b() const { return b_; }
  std::size_t m() const { return a_.rows(); }
  std::size_t n() const { return a_.cols(); }

  bool satisfied_by(std::span<const Integer> x) const;

  bool operator==(const LdeSystem&) const = default;

 private:
  IntMatrix a_;
  IntVector b_;
};

// Single equation a.x = b with positive a, n >= 2 and 1 <= b <= sum(a) - 1.
class SubsetSumInstance {
 public:
  SubsetSumInstance(IntVector a, Integer b);

  const IntVector& a() const { return a_; }
  const Integer& b() const { return b_; }
  std::size_t n() const { return a_.size(); }
  Integer total() const { return sum(a_); }
  Integer complement_rhs() const { return total() - b_; }

  // max(a) < b <= sum(a)/2
  bool is_normalized() const;
  LdeSystem to_system() const;

  bool operator==(const SubsetSumInstance&) const = default;

 private:
  IntVector a_;
  Integer b_;
};

struct Complement {
  SubsetSumInstance instance;  // same a, rhs sum(a) - b; x = 1 - y
  std::vector<bool> fixable_to_zero;  // a_i > new rhs forces y_i = 0
};

Complement complement(const SubsetSumInstance& inst);
IntVector flip(std::span<const Integer> y);  // 1 - y

double density(const SubsetSumInstance& inst);

inline Integer default_big_n() { return Integer(100000000); }

// (n+m) x n basis: column j is e_j stacked on N * A_j.
LatticeBasis build_lattice_B(const LdeSystem& sys, const Integer& big_n);

struct KernelDecomposition {
  IntMatrix D;  // n x (n-m), basis of ker_Z(A)
  IntMatrix C;  // n x m
  IntMatrix E;  // m x m, equals A C
  Integer big_n_used;
};

// LLL-reduces build_lattice_B and splits it; squares N (at most 4 times)
// until the kernel block separates. Throws EscalationExhausted.
KernelDecomposition decompose(const LdeSystem& sys, const Integer& big_n = default_big_n(),
                              const Rational& alpha = default_alpha());

// C E^-1 b when E^-1 b is integral; nullopt means no integer solution exists.
std::optional<IntVector> special_solution(const KernelDecomposition& kd, std::span<const Integer> b);

enum class VerdictStatus { BinarySolution, ShortNonBinary, NoIntegerSolution, Failure };

std::string_view to_string(VerdictStatus s);
VerdictStatus parse_verdict_status(std::string_view text);

struct AttackVerdict {
  VerdictStatus status = VerdictStatus::Failure;
  IntVector x;  // in the caller's variables; empty unless a solution was found
  std::string algorithm;
  std::optional<std::size_t> witness_column;
  std::optional<Integer> lambda;  // LO scale factor of the matched column
  bool complemented = false;

  bool solved() const { return status == VerdictStatus::BinarySolution; }
  bool operator==(const AttackVerdict&) const = default;

  // Substitution-checked constructor; throws NotASolution if A x != b.
  static AttackVerdict from_solution(const LdeSystem& sys, IntVector x, std::string algorithm);
  static AttackVerdict failure(std::string algorithm);
  static AttackVerdict no_integer_solution(std::string algorithm);
};

// Lagarias-Odlyzko: basis [I 0; -A b], scan for columns whose first n
// entries lie in {0, lambda} with a zero tail. The system form scans once;
// the subset-sum form retries on the complement.
AttackVerdict attack_lo(const LdeSystem& sys, const Rational& alpha = default_alpha());
AttackVerdict attack_lo(const SubsetSumInstance& inst, const Rational& alpha = default_alpha());

// CJLOSS, doubled to stay integral: [2I 1; 2AN 2bN]; accepted columns have
// first n entries in {-1, 1} and a zero tail. Requires 4N^2 > n.
AttackVerdict attack_cjloss(const LdeSystem& sys, const Integer& big_n = default_big_n(),
                            const Rational& alpha = default_alpha());
AttackVerdict attack_cjloss(const SubsetSumInstance& inst, const Integer& big_n = default_big_n(),
                            const Rational& alpha = default_alpha());

inline Integer default_ahl_n1() { return Integer(10000); }
// 2^(n+m) * N1^2 + 1
Integer default_ahl_n2(std::size_t n, std::size_t m, const Integer& n1);

// Aardal-Hurkens-Lenstra: basis [I 0; 0 N1; N2 A, -N2 b]; column n-m carries
// the reduced solution when its N1 entry has magnitude N1 and its tail is zero.
AttackVerdict attack_ahl(const LdeSystem& sys, const Integer& n1, const Integer& n2,
                         const Rational& alpha = default_alpha());
AttackVerdict attack_ahl(const LdeSystem& sys, const Rational& alpha = default_alpha());

}  // namespace knapcrack
