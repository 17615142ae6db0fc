#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knapcrack/disagg.hpp"
#include "knapcrack/formulations.hpp"
#include "knapcrack/lattice.hpp"

namespace knapcrack {

enum class Algorithm { Reduce, ReduceHalf, Lo, Cjloss, Ahl };

std::string_view to_string(Algorithm a);
// Accepts "reduce", "reduce-half" (or "reduce_half"), "lo", "cjloss", "ahl".
Algorithm parse_algorithm(std::string_view text);

enum class DagMode {
  Sequential,  // t = 1, 2, ..., t_max with fixed M
  JumpPoints,  // every jump point r of a single equation, ascending
};

struct SearchConfig {
  Algorithm algo = Algorithm::Reduce;
  bool use_dag = false;
  DagMode dag_mode = DagMode::Sequential;
  Integer modulus = 1000;
  Integer t_max = 200;
  Rational alpha = default_alpha();
  Integer big_n = default_big_n();
  std::uint64_t seed = 0;
  std::size_t dag_row = 0;
  RoundingMode rounding = RoundingMode::HalfDown;
};

// Default modulus by problem size: 10^3 up to n = 16, 10^4 up to n = 30,
// 10^5 beyond.
Integer default_modulus(std::size_t n);

struct AttackOutcome {
  AttackVerdict verdict;
  bool dag_used = false;
  std::optional<Integer> t_found;
  std::optional<Integer> modulus_found;
  bool exhausted = false;  // the t-search ran out without a binary solution
  std::size_t attempts = 0;  // lattice attacks performed
  double wall_ms = 0.0;
};

struct GeneratedInstance {
  LdeSystem system;
  IntVector planted;
  std::vector<double> densities;  // one per row
  std::uint64_t seed = 0;
  std::size_t resamples = 0;
};

// Weights uniform on [1, 2^n]; planted x with n/2 ones; each row resampled
// until its density lies in (0.99, 1.01), b_i > max(A_i) and b_i <= sum(A_i)/2.
// Throws GenerationBudgetExceeded after 10^4 resamples.
GeneratedInstance generate_system(std::size_t m, std::size_t n, std::uint64_t seed);
GeneratedInstance generate_instance(std::size_t n, std::uint64_t seed);

// All binary solutions, in increasing order of the bit mask (x_1 lowest).
// Full enumeration for n <= 20, meet-in-the-middle for n <= 30; throws
// TooLarge beyond that or for entries above 2^62.
std::vector<IntVector> brute_force_solve(const LdeSystem& sys);

// One lattice attack (no disaggregation).
AttackOutcome attack(const LdeSystem& sys, const SearchConfig& config);

// Plain attack first; on failure, disaggregate the configured row for each
// candidate ratio and attack the augmented system, accepting the first
// whose leading n coordinates form a binary solution of the original system.
AttackOutcome attack_with_dag(const LdeSystem& sys, const SearchConfig& config);

struct ScenarioStep {
  std::size_t row;
  DisaggParams params;
};

struct ScenarioResult {
  AttackOutcome outcome;
  IntVector truncated;  // first n coordinates of the augmented solution, if any
  std::optional<LdeSystem> augmented;
};

// Applies the steps in order, each to the system produced by the previous
// one, then attacks the final system once.
ScenarioResult attack_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps,
                               const SearchConfig& config);
// Final augmented system of a scenario chain.
LdeSystem apply_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps);

// Carries a solution x of `sys` through the chain, appending the k bits each
// step forces. nullopt means some step cuts x off (k outside [0, u_k]).
// Throws NotASolution when x does not solve `sys`.
std::optional<IntVector> extend_through_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps,
                                                 std::span<const Integer> x);

struct BenchCell {
  std::size_t m = 1;
  std::size_t n = 16;
  Algorithm algo = Algorithm::Reduce;
  bool dag = false;
  Integer modulus = 1000;
  Integer t_max = 200;
  std::size_t count = 10;
  std::uint64_t seed = 1;
};

struct BenchRow {
  BenchCell cell;
  std::size_t successes = 0;
  double success_ratio = 0.0;
  std::optional<double> avg_valid_t;  // over instances the plain attack missed
  double avg_ms = 0.0;
};

struct BenchOptions {
  std::size_t threads = 0;  // 0: KNAPCRACK_THREADS, then hardware concurrency
  bool timing = true;       // false writes avg_ms = 0 for byte-stable output
};

std::size_t resolve_threads(std::size_t requested);

// Instance i of a cell uses seed + i.
std::vector<BenchRow> bench(const std::vector<BenchCell>& grid, const BenchOptions& options = {});

}  // namespace knapcrack
