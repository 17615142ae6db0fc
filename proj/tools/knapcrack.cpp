// knapcrack command-line front end.
//
// Exit codes: 0 solved / ok, 1 unsolved, 2 usage, 3 I/O, 4 parse, 5 cap.

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knapcrack/analysis.hpp"
#include "knapcrack/csv.hpp"
#include "knapcrack/disagg.hpp"
#include "knapcrack/error.hpp"
#include "knapcrack/formulations.hpp"
#include "knapcrack/io.hpp"
#include "knapcrack/pipeline.hpp"

namespace fs = std::filesystem;
using namespace knapcrack;

namespace {

enum Exit : int { kSolved = 0, kUnsolved = 1, kUsage = 2, kIo = 3, kParse = 4, kCap = 5 };

// Thrown for bad flag values the parser itself cannot catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoFailure: return kIo;
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::SizeLimit:
    case ErrorCode::TooLarge:
    case ErrorCode::EscalationExhausted: return kCap;
    default: return kUsage;
  }
}

// Input files that are missing or unreadable count as bad input (exit 4).
LdeSystem load_input(const std::string& path) {
  try {
    return read_system(path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoFailure) throw Error(ErrorCode::ParseError, "cannot read input '" + path + "'");
    throw;
  }
}

Rational parse_alpha(const std::string& text) {
  if (text.find('/') == std::string::npos) throw UsageError("--alpha must be written P/Q, got '" + text + "'");
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError("--alpha must be written P/Q, got '" + text + "'");
  }
}

Integer parse_flag_integer(const std::string& flag, const std::string& text) {
  try {
    return parse_integer(text);
  } catch (const Error&) {
    throw UsageError(flag + " expects an integer, got '" + text + "'");
  }
}

// "t/M" kept unreduced so the modular image matches what was asked for.
DisaggParams parse_params(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw UsageError("expected t/M, got '" + text + "'");
  const Integer t = parse_flag_integer("t", text.substr(0, slash));
  const Integer m = parse_flag_integer("M", text.substr(slash + 1));
  try {
    return DisaggParams(t, m);
  } catch (const Error& e) {
    throw UsageError(std::string("invalid ratio '") + text + "': " + e.what());
  }
}

// "row:t/M,row:t/M,..."; a bare "t/M" means row 0.
std::vector<ScenarioStep> parse_scenario(const std::string& text) {
  std::vector<ScenarioStep> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t row = 0;
    const auto colon = item.find(':');
    if (colon != std::string::npos) {
      try {
        row = std::stoul(item.substr(0, colon));
      } catch (const std::exception&) {
        throw UsageError("bad row in scenario step '" + item + "'");
      }
      item = item.substr(colon + 1);
    }
    steps.push_back({row, parse_params(item)});
  }
  if (steps.empty()) throw UsageError("empty scenario");
  return steps;
}

void check_row(const LdeSystem& sys, std::size_t row) {
  if (row >= sys.m()) throw UsageError("--row " + std::to_string(row) + " outside the system's " + std::to_string(sys.m()) + " rows");
}

SubsetSumInstance row_instance(const LdeSystem& sys, std::size_t row) {
  return SubsetSumInstance(sys.A().row(row), sys.b()[row]);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::size_t m = 1, n = 16, count = 1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  if (a.n % 2 != 0) throw UsageError("--n must be even: planted solutions have exactly n/2 ones");
  if (a.m == 0 || a.m >= a.n) throw UsageError("--m must satisfy 1 <= m < n");
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + a.out + "': " + ec.message());

  nlohmann::json manifest;
  manifest["m"] = a.m;
  manifest["n"] = a.n;
  manifest["count"] = a.count;
  manifest["seed"] = a.seed;
  manifest["instances"] = nlohmann::json::array();
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.seed + i;
    const GeneratedInstance g = generate_system(a.m, a.n, seed);
    const std::string name = "inst_" + std::to_string(a.m) + "_" + std::to_string(a.n) + "_" + std::to_string(i) + ".txt";
    std::ostringstream dens;
    for (std::size_t r = 0; r < g.densities.size(); ++r) dens << (r ? " " : "") << format_double(g.densities[r]);
    write_text_file((fs::path(a.out) / name).string(),
                    format_system(g.system, {"seed=" + std::to_string(seed), "density=" + dens.str()}));
    nlohmann::json entry;
    entry["file"] = name;
    entry["seed"] = seed;
    entry["densities"] = g.densities;
    std::vector<int> planted;
    for (const auto& v : g.planted) planted.push_back(static_cast<int>(v.get_si()));
    entry["planted"] = planted;
    manifest["instances"].push_back(entry);
  }
  write_text_file((fs::path(a.out) / "manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << "wrote " << a.count << " instances to " << a.out << "\n";
  return kSolved;
}

// ---------------------------------------------------------------- attack

struct AttackArgs {
  std::string algo = "reduce";
  std::string input;
  bool dag = false;
  bool jump_points = false;
  std::optional<std::string> modulus, t_max, bign, alpha, scenario;
  std::size_t row = 0;
  bool json = false;
};

SearchConfig make_config(const std::string& algo, const std::optional<std::string>& alpha,
                         const std::optional<std::string>& bign) {
  SearchConfig c;
  try {
    c.algo = parse_algorithm(algo);
  } catch (const Error&) {
    throw UsageError("unknown --algo '" + algo + "'");
  }
  if (alpha) c.alpha = parse_alpha(*alpha);
  if (bign) c.big_n = parse_flag_integer("--bign", *bign);
  return c;
}

int cmd_attack(const AttackArgs& a) {
  SearchConfig cfg = make_config(a.algo, a.alpha, a.bign);
  const LdeSystem sys = load_input(a.input);
  check_row(sys, a.row);
  cfg.use_dag = a.dag;
  cfg.dag_mode = a.jump_points ? DagMode::JumpPoints : DagMode::Sequential;
  cfg.dag_row = a.row;
  cfg.modulus = a.modulus ? parse_flag_integer("--modulus", *a.modulus) : default_modulus(sys.n());
  cfg.t_max = a.t_max ? parse_flag_integer("--t-max", *a.t_max) : cfg.modulus - 1;

  AttackOutcome out;
  if (a.scenario) {
    const auto steps = parse_scenario(*a.scenario);
    for (const auto& s : steps) check_row(sys, s.row);
    out = attack_scenario(sys, steps, cfg).outcome;
  } else {
    out = a.dag ? attack_with_dag(sys, cfg) : attack(sys, cfg);
  }

  if (a.json) {
    std::cout << outcome_to_json(out) << "\n";
  } else {
    const AttackVerdict& v = out.verdict;
    std::cout << "status: " << to_string(v.status) << "\n"
              << "algorithm: " << v.algorithm << "\n";
    if (!v.x.empty()) std::cout << "x: " << format_vector(v.x) << "\n";
    if (out.t_found) std::cout << "t_found: " << to_string(*out.t_found) << "/" << to_string(*out.modulus_found) << "\n";
    if (out.exhausted) std::cout << "exhausted: t-search ended without a binary solution\n";
    std::cout << "attempts: " << out.attempts << "\n"
              << "wall_ms: " << format_double(out.wall_ms) << "\n";
  }
  return out.verdict.solved() ? kSolved : kUnsolved;
}

// ---------------------------------------------------------------- jumps

struct JumpsArgs {
  std::string input;
  std::optional<std::size_t> limit;
  std::uint64_t cap = kDefaultJumpCap;
  std::size_t row = 0;
  bool json = false;
};

int cmd_jumps(const JumpsArgs& a) {
  const LdeSystem sys = load_input(a.input);
  check_row(sys, a.row);
  const SubsetSumInstance inst = row_instance(sys, a.row);
  const auto points = enumerate_jump_points(inst, a.limit, a.cap);

  nlohmann::json arr = nlohmann::json::array();
  if (!a.json) std::cout << "r\tsources\tu_k\tn_k\tideal\n";
  for (const auto& jp : points) {
    const DisaggParams p(jp.value.get_num(), jp.value.get_den());
    const ModularImage img = modular_transform(inst.a(), inst.b(), p);
    const bool ideal = is_ideal(inst.a(), inst.b(), p);
    std::string sources;
    for (std::size_t i = 0; i < jp.sources.size(); ++i) sources += (i ? " " : "") + to_string(jp.sources[i]);
    if (a.json) {
      arr.push_back({{"r", to_string(jp.value)}, {"sources", sources}, {"u_k", to_string(img.u_k)},
                     {"n_k", img.n_k}, {"ideal", ideal}});
    } else {
      std::cout << to_string(jp.value) << "\t" << sources << "\t" << to_string(img.u_k) << "\t" << img.n_k << "\t"
                << (ideal ? "yes" : "no") << "\n";
    }
  }
  if (a.json) std::cout << arr.dump() << "\n";
  return kSolved;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string grid, out;
  bool no_timing = false;
  std::size_t threads = 0;
};

int cmd_bench(const BenchArgs& a) {
  const auto cells = parse_grid(read_text_file(a.grid));
  BenchOptions opts;
  opts.threads = a.threads;
  opts.timing = !a.no_timing;
  const auto rows = bench(cells, opts);
  write_text_file(a.out, bench_csv(rows));
  for (const auto& r : rows)
    std::cout << r.cell.m << "x" << r.cell.n << " " << to_string(r.cell.algo) << (r.cell.dag ? "+dag" : "") << ": "
              << r.successes << "/" << r.cell.count << "\n";
  return kSolved;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string input;
  std::optional<std::string> modulus, t_range, alpha, bign, out;
  std::vector<std::string> scenarios;
  bool all_jumps = false;
  std::size_t row = 0;
  std::string algo = "reduce";
  std::uint64_t cap = kDefaultJumpCap;
};

// Applies the steps one at a time. A step whose new row is a multiple of an
// existing one (ideal ratio, no k bits) adds nothing and is dropped.
LdeSystem chain(const LdeSystem& sys, const std::vector<ScenarioStep>& steps) {
  LdeSystem current = sys;
  for (const auto& s : steps) {
    try {
      current = build_disaggregated(current, s.row, s.params).augmented();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  return current;
}

bool chain_cuts(const LdeSystem& sys, const std::vector<ScenarioStep>& steps, IntVector x) {
  LdeSystem current = sys;
  for (const auto& s : steps) {
    const auto ext = extend_through_scenario(current, {s}, x);
    if (!ext) return true;
    x = *ext;
    try {
      current = build_disaggregated(current, s.row, s.params).augmented();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  return false;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const int modes = (a.t_range ? 1 : 0) + (a.all_jumps ? 1 : 0) + (a.scenarios.empty() ? 0 : 1);
  if (modes != 1) throw UsageError("give exactly one of --t-range, --all-jumps, --scenario");
  if (a.t_range && !a.modulus) throw UsageError("--t-range needs --modulus");

  SearchConfig cfg = make_config(a.algo, a.alpha, a.bign);
  const LdeSystem sys = load_input(a.input);
  check_row(sys, a.row);

  std::vector<std::vector<ScenarioStep>> scenarios;
  if (a.t_range) {
    const auto dots = a.t_range->find("..");
    if (dots == std::string::npos) throw UsageError("--t-range must be A..B");
    const Integer lo = parse_flag_integer("--t-range", a.t_range->substr(0, dots));
    const Integer hi = parse_flag_integer("--t-range", a.t_range->substr(dots + 2));
    const Integer m = parse_flag_integer("--modulus", *a.modulus);
    for (Integer t = lo; t <= hi; ++t) scenarios.push_back({{a.row, parse_params(to_string(t) + "/" + to_string(m))}});
  } else if (a.all_jumps) {
    for (const auto& jp : enumerate_jump_points(row_instance(sys, a.row), std::nullopt, a.cap))
      scenarios.push_back({{a.row, DisaggParams(jp.value.get_num(), jp.value.get_den())}});
  } else {
    for (const auto& s : a.scenarios) {
      scenarios.push_back(parse_scenario(s));
      for (const auto& step : scenarios.back()) check_row(sys, step.row);
    }
  }

  // The short vector a disaggregation is meant to cut comes from the plain attack.
  std::optional<IntVector> short_x;
  if (!scenarios.empty()) {
    const AttackOutcome plain = attack(sys, cfg);
    if (plain.verdict.status == VerdictStatus::ShortNonBinary) short_x = plain.verdict.x;
  }

  const std::string id = fs::path(a.input).stem().string();
  std::vector<FeatureRecord> records;
  for (const auto& steps : scenarios) {
    FeatureRecord rec;
    rec.instance_id = id;
    rec.m = sys.m();
    rec.n = sys.n();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      rec.t += (i ? ";" : "") + to_string(steps[i].params.t());
      rec.modulus += (i ? ";" : "") + to_string(steps[i].params.modulus());
    }
    const LdeSystem aug = chain(sys, steps);
    rec.features = kernel_features(decompose(aug, cfg.big_n, cfg.alpha).D);
    rec.features.cut = short_x && chain_cuts(sys, steps, *short_x);
    const AttackVerdict v = attack(aug, cfg).verdict;
    if (v.x.size() >= sys.n()) {
      const IntVector prefix(v.x.begin(), v.x.begin() + static_cast<std::ptrdiff_t>(sys.n()));
      rec.features.success = is_binary(prefix) && sys.satisfied_by(prefix);
    }
    records.push_back(std::move(rec));
  }

  if (a.out) {
    export_features_csv(records, *a.out);
    std::cout << "wrote " << records.size() << " rows to " << *a.out << "\n";
  } else {
    std::cout << features_csv(records);
  }
  return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knapcrack: lattice attacks on subset-sum and binary linear Diophantine systems"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate random instances of density about 1");
  g->add_option("--m", gen.m, "equations per system")->required();
  g->add_option("--n", gen.n, "variables (even)")->required();
  g->add_option("--count", gen.count, "number of instances")->required();
  g->add_option("--seed", gen.seed, "seed of the first instance")->required();
  g->add_option("--out", gen.out, "output directory")->required();

  AttackArgs atk;
  auto* at = app.add_subcommand("attack", "run a lattice attack on a system file");
  at->add_option("--algo", atk.algo, "reduce | reduce-half | lo | cjloss | ahl")->capture_default_str();
  at->add_option("--input", atk.input, "system file")->required();
  at->add_flag("--dag", atk.dag, "disaggregate when the plain attack fails");
  at->add_flag("--jump-points", atk.jump_points, "search jump points instead of t = 1..t-max");
  at->add_option("--modulus", atk.modulus, "modulus M for the t search");
  at->add_option("--t-max", atk.t_max, "largest t tried (default M-1)");
  at->add_option("--row", atk.row, "row to disaggregate")->capture_default_str();
  at->add_option("--scenario", atk.scenario, "fixed chain row:t/M,row:t/M,...");
  at->add_option("--alpha", atk.alpha, "LLL parameter P/Q");
  at->add_option("--bign", atk.bign, "scaling constant N");
  at->add_flag("--json", atk.json, "machine-readable output");

  JumpsArgs jmp;
  auto* jp = app.add_subcommand("jumps", "list jump points of one equation");
  jp->add_option("--input", jmp.input, "system file")->required();
  jp->add_option("--limit", jmp.limit, "print only the first K");
  jp->add_option("--cap", jmp.cap, "fail beyond this many points")->capture_default_str();
  jp->add_option("--row", jmp.row, "equation to inspect")->capture_default_str();
  jp->add_flag("--json", jmp.json, "machine-readable output");

  BenchArgs bch;
  auto* bc = app.add_subcommand("bench", "run a benchmark grid");
  bc->add_option("--grid", bch.grid, "grid file")->required();
  bc->add_option("--out", bch.out, "CSV output")->required();
  bc->add_flag("--no-timing", bch.no_timing, "write avg_ms = 0 for byte-stable output");
  bc->add_option("--threads", bch.threads, "worker threads (default KNAPCRACK_THREADS or all cores)");

  AnalyzeArgs ana;
  auto* an = app.add_subcommand("analyze", "kernel features across disaggregation scenarios");
  an->add_option("--input", ana.input, "system file")->required();
  an->add_option("--modulus", ana.modulus, "modulus M for --t-range");
  an->add_option("--t-range", ana.t_range, "A..B");
  an->add_flag("--all-jumps", ana.all_jumps, "one scenario per jump point");
  an->add_option("--scenario", ana.scenarios, "chain row:t/M,...; repeatable");
  an->add_option("--row", ana.row, "row to disaggregate")->capture_default_str();
  an->add_option("--cap", ana.cap, "jump-point cap")->capture_default_str();
  an->add_option("--alpha", ana.alpha, "LLL parameter P/Q");
  an->add_option("--bign", ana.bign, "scaling constant N");
  an->add_option("--algo", ana.algo, "attack used for the success label")->capture_default_str();
  an->add_option("--out", ana.out, "CSV output (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (at->parsed()) return cmd_attack(atk);
    if (jp->parsed()) return cmd_jumps(jmp);
    if (bc->parsed()) return cmd_bench(bch);
    if (an->parsed()) return cmd_analyze(ana);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}
