#include "knapcrack/integer.hpp"

#include <algorithm>
#include <cctype>

#include "knapcrack/error.hpp"

namespace knapcrack {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DependentColumns: return "DependentColumns";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EscalationExhausted: return "EscalationExhausted";
    case ErrorCode::SingularE: return "SingularE";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidBigInts: return "InvalidBigInts";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidRow: return "InvalidRow";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::NotNeighbours: return "NotNeighbours";
    case ErrorCode::GenerationBudgetExceeded: return "GenerationBudgetExceeded";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Integer dot(std::span<const Integer> x, std::span<const Integer> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dot product of vectors with different lengths");
  }
  Integer acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mpz_addmul(acc.get_mpz_t(), x[i].get_mpz_t(), y[i].get_mpz_t());
  }
  return acc;
}

Rational dot(std::span<const Rational> x, std::span<const Rational> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dot product of vectors with different lengths");
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

Rational dot(std::span<const Integer> x, std::span<const Rational> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dot product of vectors with different lengths");
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) != 0) acc += Rational(x[i]) * y[i];
  }
  return acc;
}

Integer squared_norm(std::span<const Integer> x) { return dot(x, x); }

Integer sum(std::span<const Integer> x) {
  Integer acc = 0;
  for (const auto& v : x) acc += v;
  return acc;
}

Integer max_element(std::span<const Integer> x) {
  if (x.empty()) throw Error(ErrorCode::DimensionMismatch, "max of empty vector");
  return *std::max_element(x.begin(), x.end());
}

bool is_binary(std::span<const Integer> x) {
  return std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0 || v == 1; });
}

bool is_zero(std::span<const Integer> x) {
  return std::all_of(x.begin(), x.end(), [](const Integer& v) { return sgn(v) == 0; });
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

IntVector make_int_vector(std::initializer_list<long> values) {
  IntVector out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Integer parse_integer(const std::string& text) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
  if (start == text.size() ||
      !std::all_of(text.begin() + static_cast<std::ptrdiff_t>(start), text.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + text + "'");
  }
  Integer z;
  z.set_str(text[0] == '+' ? text.substr(1) : text, 10);
  return z;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (sgn(den) == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_vector(std::span<const Integer> x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += x[i].get_str();
  }
  out += ")";
  return out;
}

}  // namespace knapcrack
