#include "knapcrack/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "knapcrack/csv.hpp"
#include "knapcrack/error.hpp"

namespace knapcrack {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::size_t parse_count(const std::string& tok) {
  const Integer v = parse_integer(tok);
  if (sgn(v) <= 0 || !v.fits_ulong_p()) throw Error(ErrorCode::ParseError, "expected a positive count, got '" + tok + "'");
  return v.get_ui();
}

}  // namespace

LdeSystem parse_system(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(tokens_of(line));
  }
  if (lines.empty() || lines[0].size() != 2) throw Error(ErrorCode::ParseError, "first line must be 'm n'");
  const std::size_t m = parse_count(lines[0][0]), n = parse_count(lines[0][1]);
  if (lines.size() != m + 2)
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(m + 2) + " data lines, found " +
                                           std::to_string(lines.size()));
  IntMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (lines[i + 1].size() != n)
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + " must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) a(i, j) = parse_integer(lines[i + 1][j]);
  }
  if (lines[m + 1].size() != m) throw Error(ErrorCode::ParseError, "right-hand side must have " + std::to_string(m) + " entries");
  IntVector b(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = parse_integer(lines[m + 1][i]);
  try {
    return LdeSystem(std::move(a), std::move(b));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid system: ") + e.what());
  }
}

std::string format_system(const LdeSystem& sys, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << (c.starts_with("#") ? c : "# " + c) << '\n';
  out << sys.m() << ' ' << sys.n() << '\n';
  for (std::size_t i = 0; i < sys.m(); ++i) {
    for (std::size_t j = 0; j < sys.n(); ++j) out << (j ? " " : "") << sys.A()(i, j).get_str();
    out << '\n';
  }
  for (std::size_t i = 0; i < sys.m(); ++i) out << (i ? " " : "") << sys.b()[i].get_str();
  out << '\n';
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

LdeSystem read_system(const std::string& path) { return parse_system(read_text_file(path)); }

namespace {

using nlohmann::json;

json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Integer integer_from(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "expected an integer");
}

}  // namespace

std::string outcome_to_json(const AttackOutcome& o) {
  json j;
  j["status"] = std::string(to_string(o.verdict.status));
  j["algorithm"] = o.verdict.algorithm;
  json x = json::array();
  for (const auto& v : o.verdict.x) x.push_back(integer_json(v));
  j["x"] = x;
  j["witness_column"] = o.verdict.witness_column ? json(*o.verdict.witness_column) : json(nullptr);
  j["lambda"] = o.verdict.lambda ? integer_json(*o.verdict.lambda) : json(nullptr);
  j["complemented"] = o.verdict.complemented;
  j["dag_used"] = o.dag_used;
  j["t_found"] = o.t_found ? integer_json(*o.t_found) : json(nullptr);
  j["modulus_found"] = o.modulus_found ? integer_json(*o.modulus_found) : json(nullptr);
  j["exhausted"] = o.exhausted;
  j["attempts"] = o.attempts;
  j["wall_ms"] = o.wall_ms;
  return j.dump();
}

AttackOutcome outcome_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    AttackOutcome o;
    o.verdict.status = parse_verdict_status(j.at("status").get<std::string>());
    o.verdict.algorithm = j.at("algorithm").get<std::string>();
    for (const auto& v : j.at("x")) o.verdict.x.push_back(integer_from(v));
    if (!j.at("witness_column").is_null()) o.verdict.witness_column = j.at("witness_column").get<std::size_t>();
    if (!j.at("lambda").is_null()) o.verdict.lambda = integer_from(j.at("lambda"));
    o.verdict.complemented = j.at("complemented").get<bool>();
    o.dag_used = j.at("dag_used").get<bool>();
    if (!j.at("t_found").is_null()) o.t_found = integer_from(j.at("t_found"));
    if (!j.at("modulus_found").is_null()) o.modulus_found = integer_from(j.at("modulus_found"));
    o.exhausted = j.at("exhausted").get<bool>();
    o.attempts = j.at("attempts").get<std::size_t>();
    o.wall_ms = j.at("wall_ms").get<double>();
    return o;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed outcome JSON: ") + e.what());
  }
}

std::vector<BenchCell> parse_grid(const std::string& text) {
  std::vector<BenchCell> cells;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line.compare(first, 2, "m,") == 0) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string tok; std::getline(fields, tok, ',');) {
      const auto b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
      f.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
    }
    if (f.size() != 8) throw Error(ErrorCode::ParseError, "grid line " + std::to_string(lineno) + " needs 8 fields");
    BenchCell c;
    c.m = parse_count(f[0]);
    c.n = parse_count(f[1]);
    c.algo = parse_algorithm(f[2]);
    if (f[3] == "1" || f[3] == "true") c.dag = true;
    else if (f[3] == "0" || f[3] == "false") c.dag = false;
    else throw Error(ErrorCode::ParseError, "grid line " + std::to_string(lineno) + ": dag must be 0/1");
    c.modulus = parse_integer(f[4]);
    c.t_max = parse_integer(f[5]);
    const Integer count = parse_integer(f[6]);
    if (sgn(count) < 0 || !count.fits_ulong_p()) throw Error(ErrorCode::ParseError, "bad count on grid line " + std::to_string(lineno));
    c.count = count.get_ui();
    const Integer seed = parse_integer(f[7]);
    if (sgn(seed) < 0 || !seed.fits_ulong_p()) throw Error(ErrorCode::ParseError, "bad seed on grid line " + std::to_string(lineno));
    c.seed = seed.get_ui();
    cells.push_back(c);
  }
  return cells;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  write_csv_row(out, {"m", "n", "algo", "dag", "M", "t_max", "count", "successes", "success_ratio", "avg_valid_t",
                      "avg_ms", "seed0"});
  for (const auto& r : rows) {
    const BenchCell& c = r.cell;
    write_csv_row(out, {std::to_string(c.m), std::to_string(c.n), std::string(to_string(c.algo)), c.dag ? "1" : "0",
                        c.modulus.get_str(), c.t_max.get_str(), std::to_string(c.count), std::to_string(r.successes),
                        format_double(r.success_ratio), r.avg_valid_t ? format_double(*r.avg_valid_t) : "",
                        format_double(r.avg_ms), std::to_string(c.seed)});
  }
  return out.str();
}

}  // namespace knapcrack
