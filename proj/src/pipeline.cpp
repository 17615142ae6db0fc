#include "knapcrack/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "knapcrack/error.hpp"
#include "knapcrack/reduce.hpp"

namespace knapcrack {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Reduce: return "reduce";
    case Algorithm::ReduceHalf: return "reduce-half";
    case Algorithm::Lo: return "lo";
    case Algorithm::Cjloss: return "cjloss";
    case Algorithm::Ahl: return "ahl";
  }
  return "reduce";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "reduce") return Algorithm::Reduce;
  if (text == "reduce-half" || text == "reduce_half") return Algorithm::ReduceHalf;
  if (text == "lo") return Algorithm::Lo;
  if (text == "cjloss") return Algorithm::Cjloss;
  if (text == "ahl") return Algorithm::Ahl;
  throw Error(ErrorCode::ParseError, "unknown algorithm '" + std::string(text) + "'");
}

Integer default_modulus(std::size_t n) {
  if (n <= 16) return 1000;
  if (n <= 30) return 10000;
  return 100000;
}

namespace {

constexpr std::size_t kGenerationBudget = 10000;

// Uniform on [0, 2^bits) from whole 64-bit words of the generator.
Integer random_bits(std::mt19937_64& rng, std::size_t bits) {
  Integer out = 0;
  std::size_t have = 0;
  while (have < bits) {
    const std::size_t take = std::min<std::size_t>(64, bits - have);
    std::uint64_t word = rng();
    if (take < 64) word >>= (64 - take);
    Integer chunk;
    mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
    out = (out << static_cast<unsigned long>(take)) + chunk;
    have += take;
  }
  return out;
}

double row_density(const IntVector& row) { return density(SubsetSumInstance(row, Integer(1))); }

}  // namespace

GeneratedInstance generate_system(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw Error(ErrorCode::InvalidParams, "n must be even and at least 4");
  if (m < 1 || m >= n) throw Error(ErrorCode::InvalidParams, "need 1 <= m < n");
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
  IntVector planted(n, Integer(0));
  for (std::size_t i = 0; i < n / 2; ++i) planted[order[i]] = 1;

  std::size_t resamples = 0;
  std::vector<IntVector> rows;
  IntVector b;
  std::vector<double> densities;
  while (rows.size() < m) {
    if (resamples >= kGenerationBudget)
      throw Error(ErrorCode::GenerationBudgetExceeded, "no admissible instance after 10^4 resamples");
    ++resamples;
    IntVector row(n);
    for (auto& v : row) v = random_bits(rng, n) + 1;
    const Integer rhs = dot(row, planted);
    const double dens = row_density(row);
    if (!(dens > 0.99 && dens < 1.01)) continue;
    if (!(rhs > max_element(row) && 2 * rhs <= sum(row))) continue;
    rows.push_back(std::move(row));
    b.push_back(rhs);
    densities.push_back(dens);
    if (rows.size() == m && rank(IntMatrix::from_rows(rows)) < m) {
      rows.pop_back();
      b.pop_back();
      densities.pop_back();
    }
  }
  return {LdeSystem(IntMatrix::from_rows(rows), b), planted, densities, seed, resamples};
}

GeneratedInstance generate_instance(std::size_t n, std::uint64_t seed) { return generate_system(1, n, seed); }

namespace {

using Wide = __int128;

std::vector<std::vector<Wide>> narrow_rows(const LdeSystem& sys) {
  const Integer limit = Integer(1) << 62;
  std::vector<std::vector<Wide>> rows(sys.m(), std::vector<Wide>(sys.n() + 1));
  for (std::size_t i = 0; i < sys.m(); ++i)
    for (std::size_t j = 0; j <= sys.n(); ++j) {
      const Integer& v = j < sys.n() ? sys.A()(i, j) : sys.b()[i];
      if (abs(v) > limit) throw Error(ErrorCode::TooLarge, "entries above 2^62 are not supported by brute force");
      rows[i][j] = static_cast<Wide>(v.get_si());
    }
  return rows;
}

IntVector mask_to_vector(std::uint64_t mask, std::size_t n) {
  IntVector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<long>((mask >> j) & 1U);
  return x;
}

}  // namespace

std::vector<IntVector> brute_force_solve(const LdeSystem& sys) {
  const std::size_t n = sys.n(), m = sys.m();
  if (n > 30) throw Error(ErrorCode::TooLarge, "brute force supports at most 30 unknowns");
  const auto rows = narrow_rows(sys);
  std::vector<std::uint64_t> masks;

  if (n <= 20) {
    std::vector<Wide> acc(m, 0);
    std::uint64_t gray = 0;
    for (std::uint64_t step = 0; step < (std::uint64_t{1} << n); ++step) {
      if (step > 0) {
        const unsigned bit = static_cast<unsigned>(__builtin_ctzll(step));
        const bool on = ((gray >> bit) & 1U) == 0;
        gray ^= std::uint64_t{1} << bit;
        for (std::size_t i = 0; i < m; ++i) acc[i] += on ? rows[i][bit] : -rows[i][bit];
      }
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) ok = (acc[i] == rows[i][n]);
      if (ok) masks.push_back(gray);
    }
  } else {
    const std::size_t left = n / 2, right = n - left;
    auto sums = [&](std::size_t offset, std::size_t width, std::uint64_t mask) {
      std::vector<Wide> s(m, 0);
      for (std::size_t j = 0; j < width; ++j)
        if ((mask >> j) & 1U)
          for (std::size_t i = 0; i < m; ++i) s[i] += rows[i][offset + j];
      return s;
    };
    std::map<std::vector<Wide>, std::vector<std::uint64_t>> table;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << left); ++mask) table[sums(0, left, mask)].push_back(mask);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << right); ++mask) {
      std::vector<Wide> need = sums(left, right, mask);
      for (std::size_t i = 0; i < m; ++i) need[i] = rows[i][n] - need[i];
      const auto it = table.find(need);
      if (it == table.end()) continue;
      for (std::uint64_t lm : it->second) masks.push_back(lm | (mask << left));
    }
  }
  std::sort(masks.begin(), masks.end());
  std::vector<IntVector> out;
  for (std::uint64_t mask : masks) out.push_back(mask_to_vector(mask, n));
  return out;
}

namespace {

bool is_subset_sum_shape(const LdeSystem& sys) {
  if (sys.m() != 1) return false;
  for (std::size_t j = 0; j < sys.n(); ++j)
    if (sgn(sys.A()(0, j)) <= 0) return false;
  const Integer total = sum(sys.A().row(0));
  return sys.b()[0] >= 1 && sys.b()[0] <= total - 1;
}

SubsetSumInstance as_instance(const LdeSystem& sys) { return SubsetSumInstance(sys.A().row(0), sys.b()[0]); }

AttackVerdict run_algorithm(const LdeSystem& sys, const SearchConfig& config) {
  switch (config.algo) {
    case Algorithm::Reduce:
    case Algorithm::ReduceHalf: {
      const std::string name(to_string(config.algo));
      const KernelDecomposition kd = decompose(sys, config.big_n, config.alpha);
      const auto xb = special_solution(kd, sys.b());
      if (!xb) return AttackVerdict::no_integer_solution(name);
      IntVector x = config.algo == Algorithm::Reduce ? reduce(*xb, kd.D, config.rounding)
                                                     : reduce_half(*xb, kd.D, config.rounding);
      return AttackVerdict::from_solution(sys, std::move(x), name);
    }
    case Algorithm::Lo:
      return is_subset_sum_shape(sys) ? attack_lo(as_instance(sys), config.alpha) : attack_lo(sys, config.alpha);
    case Algorithm::Cjloss:
      return is_subset_sum_shape(sys) ? attack_cjloss(as_instance(sys), config.big_n, config.alpha)
                                      : attack_cjloss(sys, config.big_n, config.alpha);
    case Algorithm::Ahl:
      return attack_ahl(sys, config.alpha);
  }
  return AttackVerdict::failure(std::string(to_string(config.algo)));
}

bool needs_complement(const LdeSystem& sys) {
  return is_subset_sum_shape(sys) && 2 * sys.b()[0] > sum(sys.A().row(0));
}

LdeSystem complement_system(const LdeSystem& sys) { return complement(as_instance(sys)).instance.to_system(); }

AttackVerdict flip_back(const LdeSystem& original, const AttackVerdict& v) {
  if (v.x.empty()) return v;
  AttackVerdict out = AttackVerdict::from_solution(original, flip(v.x), v.algorithm);
  out.witness_column = v.witness_column;
  out.lambda = v.lambda;
  out.complemented = !v.complemented;
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

IntVector prefix(const IntVector& x, std::size_t n) {
  return IntVector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(std::min(n, x.size())));
}

}  // namespace

AttackOutcome attack(const LdeSystem& sys, const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  AttackOutcome out;
  if (needs_complement(sys)) {
    out.verdict = flip_back(sys, run_algorithm(complement_system(sys), config));
  } else {
    out.verdict = run_algorithm(sys, config);
  }
  out.attempts = 1;
  out.wall_ms = elapsed_ms(start);
  return out;
}

namespace {

struct Candidate {
  Integer t;
  Integer modulus;
};

std::vector<Candidate> dag_candidates(const LdeSystem& sys, const SearchConfig& config) {
  std::vector<Candidate> out;
  if (config.dag_mode == DagMode::JumpPoints) {
    const SubsetSumInstance inst(sys.A().row(config.dag_row), sys.b()[config.dag_row]);
    for (const auto& jp : enumerate_jump_points(inst)) out.push_back({jp.value.get_num(), jp.value.get_den()});
    return out;
  }
  if (config.modulus <= 1) throw Error(ErrorCode::InvalidParams, "modulus must exceed 1");
  const Integer last = std::min(config.t_max, Integer(config.modulus - 1));
  for (Integer t = 1; t <= last; ++t) out.push_back({t, config.modulus});
  return out;
}

// Tries one ratio; returns the verdict re-expressed in the original unknowns.
std::optional<AttackVerdict> try_ratio(const LdeSystem& sys, const SearchConfig& config, const Candidate& c,
                                       std::size_t& attempts) {
  std::optional<LdeSystem> aug;
  try {
    aug = build_disaggregated(sys, config.dag_row, DisaggParams(c.t, c.modulus)).augmented();
  } catch (const Error& e) {
    // A zero or dependent extra row carries no information.
    if (e.code() == ErrorCode::RankDeficient || e.code() == ErrorCode::InvalidInstance) return std::nullopt;
    throw;
  }
  ++attempts;
  SearchConfig inner = config;
  inner.use_dag = false;
  const AttackVerdict v = run_algorithm(*aug, inner);
  if (v.x.empty()) return std::nullopt;
  AttackVerdict truncated = AttackVerdict::from_solution(sys, prefix(v.x, sys.n()), v.algorithm);
  truncated.witness_column = v.witness_column;
  truncated.lambda = v.lambda;
  return truncated;
}

}  // namespace

AttackOutcome attack_with_dag(const LdeSystem& sys, const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.dag_row >= sys.m()) throw Error(ErrorCode::InvalidRow, "DAG row outside the system");
  if (needs_complement(sys)) {
    AttackOutcome out = attack_with_dag(complement_system(sys), config);
    out.verdict = flip_back(sys, out.verdict);
    out.wall_ms = elapsed_ms(start);
    return out;
  }
  AttackOutcome out = attack(sys, config);
  out.dag_used = true;
  if (out.verdict.solved()) {
    out.wall_ms = elapsed_ms(start);
    return out;
  }
  for (const Candidate& c : dag_candidates(sys, config)) {
    auto v = try_ratio(sys, config, c, out.attempts);
    if (!v) continue;
    if (v->solved()) {
      out.verdict = std::move(*v);
      out.t_found = c.t;
      out.modulus_found = c.modulus;
      out.wall_ms = elapsed_ms(start);
      return out;
    }
    const bool better = out.verdict.x.empty() || squared_norm(v->x) < squared_norm(out.verdict.x);
    if (better) out.verdict = std::move(*v);
  }
  out.exhausted = true;
  out.wall_ms = elapsed_ms(start);
  return out;
}

LdeSystem apply_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps) {
  LdeSystem current = sys;
  for (const auto& step : steps) current = build_disaggregated(current, step.row, step.params).augmented();
  return current;
}

std::optional<IntVector> extend_through_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps,
                                                 std::span<const Integer> x) {
  if (!sys.satisfied_by(x)) throw Error(ErrorCode::NotASolution, "vector does not solve the system");
  LdeSystem current = sys;
  IntVector ext(x.begin(), x.end());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const DisaggregatedSystem d = build_disaggregated(current, steps[s].row, steps[s].params);
    const IntVector& row = d.extra_row();
    Integer k = d.extra_rhs();
    for (std::size_t i = 0; i < ext.size(); ++i) k -= row[i] * ext[i];
    if (sgn(k) < 0 || k > d.image().u_k) return std::nullopt;
    for (std::size_t bit = 0; bit < d.k_count(); ++bit) ext.emplace_back(mpz_tstbit(k.get_mpz_t(), bit));
    if (s + 1 < steps.size()) current = d.augmented();
  }
  return ext;
}

ScenarioResult attack_scenario(const LdeSystem& sys, const std::vector<ScenarioStep>& steps,
                               const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult res;
  res.augmented = apply_scenario(sys, steps);
  SearchConfig inner = config;
  inner.use_dag = false;
  const AttackVerdict v = run_algorithm(*res.augmented, inner);
  res.outcome.dag_used = !steps.empty();
  res.outcome.attempts = 1;
  if (!v.x.empty()) {
    res.truncated = prefix(v.x, sys.n());
    res.outcome.verdict = AttackVerdict::from_solution(sys, res.truncated, v.algorithm);
    res.outcome.verdict.witness_column = v.witness_column;
    res.outcome.verdict.lambda = v.lambda;
    if (res.outcome.verdict.solved() && !steps.empty()) {
      res.outcome.t_found = steps.back().params.t();
      res.outcome.modulus_found = steps.back().params.modulus();
    }
  } else {
    res.outcome.verdict = v;
  }
  res.outcome.wall_ms = elapsed_ms(start);
  return res;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KNAPCRACK_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

struct InstanceResult {
  bool solved = false;
  bool initially_solved = false;
  std::optional<Integer> t_found;
  double ms = 0.0;
};

InstanceResult run_instance(const BenchCell& cell, std::uint64_t seed) {
  const GeneratedInstance g = cell.m == 1 ? generate_instance(cell.n, seed) : generate_system(cell.m, cell.n, seed);
  SearchConfig config;
  config.algo = cell.algo;
  config.use_dag = cell.dag;
  config.modulus = cell.modulus;
  config.t_max = cell.t_max;
  config.seed = seed;
  const AttackOutcome o = cell.dag ? attack_with_dag(g.system, config) : attack(g.system, config);
  InstanceResult r;
  r.solved = o.verdict.solved();
  r.t_found = o.t_found;
  r.initially_solved = r.solved && !o.t_found;
  r.ms = o.wall_ms;
  return r;
}

}  // namespace

std::vector<BenchRow> bench(const std::vector<BenchCell>& grid, const BenchOptions& options) {
  struct Job {
    std::size_t cell;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < grid.size(); ++c)
    for (std::size_t i = 0; i < grid[c].count; ++i) jobs.push_back({c, i});
  std::vector<InstanceResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_instance(grid[jobs[j].cell], grid[jobs[j].cell].seed + jobs[j].index);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(resolve_threads(options.threads), std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<BenchRow> rows;
  std::size_t j = 0;
  for (const auto& cell : grid) {
    BenchRow row;
    row.cell = cell;
    double total_ms = 0.0, t_sum = 0.0;
    std::size_t t_count = 0;
    for (std::size_t i = 0; i < cell.count; ++i, ++j) {
      const InstanceResult& r = results[j];
      if (r.solved) ++row.successes;
      if (r.t_found) {
        t_sum += r.t_found->get_d();
        ++t_count;
      }
      total_ms += r.ms;
    }
    if (cell.count > 0) {
      row.success_ratio = static_cast<double>(row.successes) / static_cast<double>(cell.count);
      row.avg_ms = options.timing ? total_ms / static_cast<double>(cell.count) : 0.0;
    }
    if (t_count > 0) row.avg_valid_t = t_sum / static_cast<double>(t_count);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace knapcrack
