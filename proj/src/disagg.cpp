#include "knapcrack/disagg.hpp"

#include <queue>
#include <stdexcept>
#include <utility>

#include "knapcrack/error.hpp"

namespace knapcrack {

DisaggParams::DisaggParams(Integer t, Integer modulus) : t_(std::move(t)), m_(std::move(modulus)) {
  if (sgn(t_) <= 0 || t_ >= m_)
    throw Error(ErrorCode::InvalidParams, "need 0 < t < M, got t=" + t_.get_str() + " M=" + m_.get_str());
}

Rational DisaggParams::ratio() const {
  Rational r(t_, m_);
  r.canonicalize();
  return r;
}

namespace {

void check_weights(std::span<const Integer> a, const Integer& b) {
  for (const auto& v : a)
    if (sgn(v) < 0) throw Error(ErrorCode::InvalidInstance, "disaggregation needs non-negative weights");
  if (sgn(b) < 0) throw Error(ErrorCode::InvalidInstance, "disaggregation needs a non-negative target");
}

Integer floor_times(const Integer& x, const Rational& r) {
  Integer num = x * r.get_num(), q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::size_t bit_length(const Integer& u) { return sgn(u) == 0 ? 0 : mpz_sizeinbase(u.get_mpz_t(), 2); }

Integer complement_target(std::span<const Integer> a, const Integer& b) { return sum(a) - b; }

}  // namespace

ModularImage modular_transform(std::span<const Integer> a, const Integer& b, const DisaggParams& p) {
  check_weights(a, b);
  ModularImage img;
  img.c.resize(a.size());
  img.v.resize(a.size());
  const Integer& t = p.t();
  const Integer& m = p.modulus();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Integer ta = t * a[i];
    mpz_fdiv_qr(img.v[i].get_mpz_t(), img.c[i].get_mpz_t(), ta.get_mpz_t(), m.get_mpz_t());
  }
  Integer tb = t * b;
  mpz_fdiv_qr(img.w.get_mpz_t(), img.d.get_mpz_t(), tb.get_mpz_t(), m.get_mpz_t());
  img.u_k = uk_bound(a, b, p.ratio());
  img.n_k = bit_length(img.u_k);
  return img;
}

Rational g_value(std::span<const Integer> a, const Integer& b, const Rational& r) {
  Rational g = Rational(complement_target(a, b)) * r + Rational(floor_times(b, r));
  for (const auto& v : a) g -= floor_times(v, r);
  return g;
}

Integer uk_bound(std::span<const Integer> a, const Integer& b, const Rational& r) {
  check_weights(a, b);
  Integer u = floor_times(complement_target(a, b), r) + floor_times(b, r);
  for (const auto& v : a) u -= floor_times(v, r);
  return u;
}

bool is_ideal(std::span<const Integer> a, const Integer& b, const DisaggParams& p) {
  const ModularImage img = modular_transform(a, b, p);
  const bool by_residues = sum(img.c) < p.modulus() + img.d;
  const bool by_g = g_value(a, b, p.ratio()) < 1;
  const bool by_uk = sgn(img.u_k) == 0;
  if (by_residues != by_g || by_g != by_uk)
    throw std::logic_error("ideal-point conditions disagree for t=" + p.t().get_str() + " M=" + p.modulus().get_str());
  return by_residues;
}

DisaggregatedSystem::DisaggregatedSystem(LdeSystem base, std::size_t row_index, DisaggParams params,
                                         ModularImage image)
    : base_(std::move(base)), row_(row_index), params_(std::move(params)), image_(std::move(image)) {
  extra_row_ = image_.v;
  Integer power = 1;
  for (std::size_t i = 0; i < image_.n_k; ++i) {
    extra_row_.push_back(power);
    power *= 2;
  }
}

LdeSystem DisaggregatedSystem::augmented() const {
  const std::size_t m = base_.m(), n = base_.n(), nk = image_.n_k;
  IntMatrix a(m + 1, n + nk);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = base_.A()(i, j);
  for (std::size_t j = 0; j < n + nk; ++j) a(m, j) = extra_row_[j];
  IntVector b = base_.b();
  b.push_back(image_.w);
  return LdeSystem(std::move(a), std::move(b));
}

std::string DisaggregatedSystem::header() const {
  return "# t=" + params_.t().get_str() + " M=" + params_.modulus().get_str() + " row=" + std::to_string(row_) +
         " u_k=" + image_.u_k.get_str() + " n_k=" + std::to_string(image_.n_k);
}

DisaggregatedSystem build_disaggregated(const LdeSystem& sys, std::size_t row_index, const DisaggParams& p) {
  if (row_index >= sys.m())
    throw Error(ErrorCode::InvalidRow, "row " + std::to_string(row_index) + " outside a system of " +
                                           std::to_string(sys.m()) + " equations");
  const IntVector row = sys.A().row(row_index);
  return DisaggregatedSystem(sys, row_index, p, modular_transform(row, sys.b()[row_index], p));
}

std::string to_string(const JumpSource& s) {
  switch (s.kind) {
    case JumpSourceKind::Weight: return "a" + std::to_string(s.index + 1);
    case JumpSourceKind::Target: return "b";
    case JumpSourceKind::Complement: return "b~";
  }
  return "?";
}

namespace {

struct Denominator {
  Integer q;
  JumpSource source;
};

std::vector<Denominator> denominators(const SubsetSumInstance& inst) {
  std::vector<Denominator> out;
  for (std::size_t i = 0; i < inst.n(); ++i) out.push_back({inst.a()[i], {JumpSourceKind::Weight, i}});
  out.push_back({inst.b(), {JumpSourceKind::Target, 0}});
  out.push_back({inst.complement_rhs(), {JumpSourceKind::Complement, 0}});
  return out;
}

}  // namespace

std::vector<JumpPoint> enumerate_jump_points(const SubsetSumInstance& inst, std::optional<std::size_t> limit,
                                             std::uint64_t cap) {
  const std::vector<Denominator> dens = denominators(inst);
  // Min-heap over the next numerator j of each denominator; j/q ascending.
  struct Cursor {
    Integer j;
    std::size_t source;
  };
  auto greater = [&](const Cursor& x, const Cursor& y) {
    const int c = cmp(x.j * dens[y.source].q, y.j * dens[x.source].q);
    return c != 0 ? c > 0 : x.source > y.source;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(greater)> heap(greater);
  for (std::size_t s = 0; s < dens.size(); ++s)
    if (dens[s].q > 1) heap.push({Integer(1), s});

  std::vector<JumpPoint> out;
  while (!heap.empty()) {
    Cursor cur = heap.top();
    heap.pop();
    Rational value(cur.j, dens[cur.source].q);
    value.canonicalize();
    if (!out.empty() && out.back().value == value) {
      out.back().sources.push_back(dens[cur.source].source);
    } else {
      if (limit && out.size() == *limit) break;
      if (!limit && out.size() >= cap)
        throw Error(ErrorCode::SizeLimit, "more than " + std::to_string(cap) + " jump points");
      out.push_back({value, {dens[cur.source].source}});
    }
    cur.j += 1;
    if (cur.j < dens[cur.source].q) heap.push(std::move(cur));
  }
  return out;
}

bool is_jump_point(const SubsetSumInstance& inst, const Rational& r) {
  if (r <= 0 || r >= 1) return false;
  for (const auto& d : denominators(inst))
    if (mpz_divisible_p(d.q.get_mpz_t(), r.get_den_mpz_t()) != 0) return true;
  return false;
}

bool are_neighbours(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2) {
  if (!(r1 < r2) || !is_jump_point(inst, r1) || !is_jump_point(inst, r2)) return false;
  // Count j with r1 < j/q < r2 for every denominator without enumerating.
  for (const auto& d : denominators(inst)) {
    const Integer inside = ceil(Rational(d.q) * r2) - 1 - floor(Rational(d.q) * r1);
    if (sgn(inside) > 0) return false;
  }
  return true;
}

namespace {

void require_solution(const SubsetSumInstance& inst, std::span<const Integer> x) {
  if (x.size() != inst.n() || dot(inst.a(), x) != inst.b())
    throw Error(ErrorCode::NotASolution, format_vector(x) + " does not satisfy a.x = b");
}

}  // namespace

bool cuts_off(const SubsetSumInstance& inst, const Rational& r, std::span<const Integer> x) {
  require_solution(inst, x);
  Integer k = floor_times(inst.b(), r);
  for (std::size_t i = 0; i < x.size(); ++i) k -= floor_times(inst.a()[i], r) * x[i];
  return sgn(k) < 0 || k > uk_bound(inst.a(), inst.b(), r);
}

NjpDeltas njp_deltas(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2) {
  if (!are_neighbours(inst, r1, r2))
    throw Error(ErrorCode::NotNeighbours, r1.get_str() + " and " + r2.get_str() + " are not adjacent jump points");
  NjpDeltas d;
  d.dv.resize(inst.n());
  Integer sum_dv = 0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    d.dv[i] = floor_times(inst.a()[i], r2) - floor_times(inst.a()[i], r1);
    sum_dv += d.dv[i];
  }
  d.dw = floor_times(inst.b(), r2) - floor_times(inst.b(), r1);
  const Integer bt = inst.complement_rhs();
  d.dw_tilde = floor_times(bt, r2) - floor_times(bt, r1);
  d.du_k = d.dw_tilde + d.dw - sum_dv;
  return d;
}

bool njp_right_dominates(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2,
                         std::span<const Integer> x) {
  const NjpDeltas d = njp_deltas(inst, r1, r2);
  require_solution(inst, x);
  const Integer dvx = dot(d.dv, x);
  return d.dw <= dvx && dvx <= sum(d.dv) - d.dw_tilde;
}

bool njp_left_dominates(const SubsetSumInstance& inst, const Rational& r1, const Rational& r2,
                        std::span<const Integer> x) {
  const NjpDeltas d = njp_deltas(inst, r1, r2);
  require_solution(inst, x);
  const Integer dvx = dot(d.dv, x);
  return sum(d.dv) - d.dw_tilde <= dvx && dvx <= d.dw;
}

}  // namespace knapcrack
