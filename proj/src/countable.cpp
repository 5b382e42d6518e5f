#include "lorentz_ops/countable.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace lorentz_ops {

namespace {

using u64 = std::uint64_t;

u64 abs_u(std::int64_t v) { return static_cast<u64>(v < 0 ? -v : v); }

struct MapBounds {
  u64 thr = 0;
  u64 modulus = 1;
  u64 max_abs_shift = 0;
  u64 max_special = 0;  // largest exceptional or constant image
};

MapBounds bounds_of(const TailResidueMap& T) {
  MapBounds b;
  b.thr = T.threshold();
  b.modulus = T.modulus();
  for (u64 y : T.head) b.max_special = std::max(b.max_special, y);
  for (const TailRule& r : T.rules) {
    if (r.kind == TailRule::Kind::Shift) {
      b.max_abs_shift = std::max(b.max_abs_shift, abs_u(r.value));
    } else {
      b.max_special = std::max(b.max_special, static_cast<u64>(r.value));
    }
  }
  return b;
}

/// Smallest n > from with n = residue (mod modulus).
u64 first_in_class(u64 from, u64 residue, u64 modulus) {
  u64 n = from + 1;
  return n + (residue % modulus + modulus - n % modulus) % modulus;
}

template <class V>
bool all_tail_zero(const Periodic<V>& p) {
  for (const V& v : p.tail()) {
    if (!(v == V{})) return false;
  }
  return true;
}

/// Coefficients of the quadratic through (0, g0), (1, g1), (2, g2).
struct Quadratic {
  Rational a2, a1, a0;
  Rational at(const Rational& t) const { return (a2 * t + a1) * t + a0; }
};

Quadratic interpolate(const Rational& g0, const Rational& g1, const Rational& g2) {
  Quadratic q;
  q.a2 = (g0 - 2 * g1 + g2) / 2;
  q.a1 = g1 - g0 - q.a2;
  q.a0 = g0;
  return q;
}

/// Infimum of q over integers t >= 0, or nullopt when unbounded below.
std::optional<Rational> min_over_naturals(const Quadratic& q) {
  if (sgn(q.a2) < 0) return std::nullopt;
  if (sgn(q.a2) == 0) {
    if (sgn(q.a1) < 0) return std::nullopt;
    return q.a0;
  }
  Rational best = q.a0;
  Rational vertex = -q.a1 / (2 * q.a2);
  if (vertex > 0) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), vertex.get_num_mpz_t(), vertex.get_den_mpz_t());
    for (mpz_class t = fl; t <= fl + 1; ++t) {
      if (t >= 0) best = std::min(best, q.at(Rational(t)));
    }
  }
  return best;
}

/// Up to `limit` smallest n in s with T(n) = m.
std::vector<u64> fiber_in(const TailResidueMap& T, u64 m, const StructuredSet& s, std::size_t limit) {
  std::vector<u64> out;
  const u64 thr = T.threshold();
  const u64 r = T.modulus();
  for (u64 n = 1; n <= thr; ++n) {
    if (T.head[n - 1] == m && s.contains(n)) out.push_back(n);
  }
  const u64 joint = std::lcm(r, s.bits.period());
  for (u64 j = 0; j < r; ++j) {
    const TailRule& rule = T.rules[j];
    if (rule.kind == TailRule::Kind::Shift) {
      std::int64_t n = static_cast<std::int64_t>(m) - rule.value;
      if (n > static_cast<std::int64_t>(thr) && static_cast<u64>(n) % r == j && s.contains(static_cast<u64>(n))) {
        out.push_back(static_cast<u64>(n));
      }
    } else if (static_cast<u64>(rule.value) == m) {
      u64 window = std::max(thr, s.bits.threshold()) + joint * (limit + 1) + r;
      std::size_t found = 0;
      for (u64 n = first_in_class(thr, j, r); n <= window && found < limit; n += r) {
        if (s.contains(n)) {
          out.push_back(n);
          ++found;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > limit) out.resize(limit);
  return out;
}

Periodic<ExtRational> to_ext(const Periodic<Rational>& p) {
  return p.map([](const Rational& v) { return ExtRational(v); });
}

}  // namespace

CountableSpace::CountableSpace(u64 threshold, const std::map<u64, Rational>& exceptions, const Rational& tail_weight) {
  if (sgn(tail_weight) <= 0) throw ValidationError("weight must be positive (tail)");
  std::vector<Rational> head(threshold, tail_weight);
  for (const auto& [n, w] : exceptions) {
    if (n == 0 || n > threshold) throw ValidationError("exceptional weight index must lie in 1..threshold");
    if (sgn(w) <= 0) throw ValidationError("weight must be positive (atom " + std::to_string(n) + ")");
    head[n - 1] = w;
  }
  weight = Periodic<Rational>(std::move(head), {tail_weight});
}

TailResidueMap::TailResidueMap(u64 threshold, const std::map<u64, u64>& exceptions, std::vector<TailRule> r)
    : rules(std::move(r)) {
  if (rules.empty()) throw ValidationError("tail rules need a modulus of at least 1");
  for (const auto& [n, y] : exceptions) {
    if (n == 0 || n > threshold) throw ValidationError("map exception index must lie in 1..threshold");
    if (y == 0) throw ValidationError("map images must be at least 1");
  }
  head.resize(threshold);
  for (u64 n = 1; n <= threshold; ++n) {
    auto it = exceptions.find(n);
    if (it != exceptions.end()) {
      head[n - 1] = it->second;
      continue;
    }
    const TailRule& rule = rules[n % rules.size()];
    std::int64_t y = rule.kind == TailRule::Kind::Shift ? static_cast<std::int64_t>(n) + rule.value : rule.value;
    if (y < 1) throw ValidationError("map image of " + std::to_string(n) + " falls below 1");
    head[n - 1] = static_cast<u64>(y);
  }
}

u64 TailResidueMap::operator()(u64 n) const {
  if (n <= head.size()) return head[n - 1];
  const TailRule& rule = rule_for(n);
  if (rule.kind == TailRule::Kind::Constant) return static_cast<u64>(rule.value);
  return static_cast<u64>(static_cast<std::int64_t>(n) + rule.value);
}

StructuredSet make_structured_set(const std::vector<u64>& members) {
  u64 top = 0;
  for (u64 n : members) top = std::max(top, n);
  std::vector<bool> head(top, false);
  for (u64 n : members) {
    if (n == 0) throw ValidationError("atom indices start at 1");
    head[n - 1] = true;
  }
  return {Periodic<bool>(std::move(head), {false})};
}

StructuredSet residue_tail(u64 from, u64 residue, u64 modulus) {
  std::vector<bool> tail(modulus, false);
  tail[residue % modulus] = true;
  return {Periodic<bool>(std::vector<bool>(from, false), std::move(tail))};
}

StructuredSet empty_set(const CountableSpace&) { return {Periodic<bool>(false)}; }
StructuredSet full_set(const CountableSpace&) { return {Periodic<bool>(true)}; }

StructuredSet unite(const StructuredSet& a, const StructuredSet& b) {
  return {Periodic<bool>::combine(a.bits, b.bits, [](bool x, bool y) { return x || y; })};
}

StructuredSet intersect(const StructuredSet& a, const StructuredSet& b) {
  return {Periodic<bool>::combine(a.bits, b.bits, [](bool x, bool y) { return x && y; })};
}

StructuredSet minus(const StructuredSet& a, const StructuredSet& b) {
  return {Periodic<bool>::combine(a.bits, b.bits, [](bool x, bool y) { return x && !y; })};
}

ExtRational measure_of(const CountableSpace& X, const StructuredSet& a) {
  return measure_of(X, base_measure(X), a);
}

void validate(const CountableSpace&, const TailResidueMap& T) {
  const u64 thr = T.threshold();
  const u64 r = T.modulus();
  for (u64 y : T.head) {
    if (y == 0) throw ValidationError("map images must be at least 1");
  }
  for (u64 j = 0; j < r; ++j) {
    const TailRule& rule = T.rules[j];
    if (rule.kind == TailRule::Kind::Constant) {
      if (rule.value < 1) throw ValidationError("constant tail image must be at least 1");
      continue;
    }
    u64 n = first_in_class(thr, j, r);
    if (static_cast<std::int64_t>(n) + rule.value < 1) {
      throw ValidationError("tail shift for residue " + std::to_string(j) + " sends " + std::to_string(n) +
                            " below 1");
    }
  }
}

TailResidueMap identity_map(const CountableSpace&) { return TailResidueMap(); }

StructuredSet preimage1(const CountableSpace&, const TailResidueMap& T, const StructuredSet& a) {
  MapBounds b = bounds_of(T);
  u64 bound = b.thr + a.bits.threshold() + b.max_abs_shift;
  u64 period = std::lcm(b.modulus, a.bits.period());
  return {Periodic<bool>::tabulate(bound, period, [&](u64 n) { return a.contains(T(n)); })};
}

StructuredSet image1(const CountableSpace&, const TailResidueMap& T, const StructuredSet& a) {
  MapBounds b = bounds_of(T);
  const u64 r = b.modulus;
  const u64 joint = std::lcm(r, a.bits.period());
  std::set<u64> special;
  for (u64 n = 1; n <= b.thr; ++n) {
    if (a.contains(n)) special.insert(T.head[n - 1]);
  }
  for (u64 j = 0; j < r; ++j) {
    const TailRule& rule = T.rules[j];
    if (rule.kind != TailRule::Kind::Constant) continue;
    u64 window = std::max(b.thr, a.bits.threshold()) + joint + r;
    for (u64 n = first_in_class(b.thr, j, r); n <= window; n += r) {
      if (a.contains(n)) {
        special.insert(static_cast<u64>(rule.value));
        break;
      }
    }
  }
  u64 bound = std::max({b.max_special, b.thr + b.max_abs_shift, a.bits.threshold() + b.max_abs_shift});
  auto member = [&](u64 y) {
    if (special.count(y)) return true;
    for (u64 j = 0; j < r; ++j) {
      const TailRule& rule = T.rules[j];
      if (rule.kind != TailRule::Kind::Shift) continue;
      std::int64_t n = static_cast<std::int64_t>(y) - rule.value;
      if (n > static_cast<std::int64_t>(b.thr) && static_cast<u64>(n) % r == j && a.contains(static_cast<u64>(n))) {
        return true;
      }
    }
    return false;
  };
  return {Periodic<bool>::tabulate(bound, joint, member)};
}

CountableMeasure base_measure(const CountableSpace& X) { return {to_ext(X.weight)}; }

CountableMeasure push_measure(const CountableSpace&, const TailResidueMap& T, const CountableMeasure& m) {
  MapBounds b = bounds_of(T);
  const u64 r = b.modulus;
  const u64 joint = std::lcm(r, m.mass.period());
  std::map<u64, ExtRational> special;
  for (u64 n = 1; n <= b.thr; ++n) special[T.head[n - 1]] += m.mass.at(n);
  for (u64 j = 0; j < r; ++j) {
    const TailRule& rule = T.rules[j];
    if (rule.kind != TailRule::Kind::Constant) continue;
    ExtRational total = 0;
    u64 settled = std::max(b.thr, m.mass.threshold());
    for (u64 n = first_in_class(b.thr, j, r); n <= settled; n += r) total += m.mass.at(n);
    for (u64 n = first_in_class(settled, j, r); n <= settled + joint; n += r) {
      if (!m.mass.at(n).is_zero()) total = ExtRational::pos_inf();
    }
    special[static_cast<u64>(rule.value)] += total;
  }
  u64 bound = std::max({b.max_special, b.thr + b.max_abs_shift, m.mass.threshold() + b.max_abs_shift});
  auto mass = [&](u64 y) {
    ExtRational total = 0;
    if (auto it = special.find(y); it != special.end()) total += it->second;
    for (u64 j = 0; j < r; ++j) {
      const TailRule& rule = T.rules[j];
      if (rule.kind != TailRule::Kind::Shift) continue;
      std::int64_t n = static_cast<std::int64_t>(y) - rule.value;
      if (n > static_cast<std::int64_t>(b.thr) && static_cast<u64>(n) % r == j) total += m.mass.at(static_cast<u64>(n));
    }
    return total;
  };
  return {Periodic<ExtRational>::tabulate(bound, joint, mass)};
}

ExtRational measure_of(const CountableSpace&, const CountableMeasure& m, const StructuredSet& a) {
  u64 settled = std::max(m.mass.threshold(), a.bits.threshold());
  u64 joint = std::lcm(m.mass.period(), a.bits.period());
  ExtRational total = 0;
  for (u64 n = 1; n <= settled; ++n) {
    if (a.contains(n)) total += m.mass.at(n);
  }
  for (u64 n = settled + 1; n <= settled + joint; ++n) {
    if (a.contains(n) && !m.mass.at(n).is_zero()) return ExtRational::pos_inf();
  }
  return total;
}

CountableDensity density_of(const CountableSpace& X, const CountableMeasure& m) {
  u64 settled = std::max(m.mass.threshold(), X.weight.threshold());
  u64 joint = std::lcm(m.mass.period(), X.weight.period());
  return {Periodic<Rational>::tabulate(settled, joint, [&](u64 n) {
    const ExtRational& v = m.mass.at(n);
    if (!v.is_finite()) throw InfiniteAtomMass("atom " + std::to_string(n) + " has infinite preimage mass");
    return Rational(v.value() / X.weight.at(n));
  })};
}

StructuredSet zero_set(const CountableSpace&, const CountableDensity& d) {
  return {d.value.map([](const Rational& v) { return sgn(v) == 0; })};
}

bool density_bounded(const CountableSpace&, const CountableDensity&) { return true; }

bool is_nonsingular(const CountableSpace&, const TailResidueMap&) { return true; }

bool measure_nonincreasing_forward(const CountableSpace& X, const TailResidueMap& T) {
  MapBounds b = bounds_of(T);
  u64 bound = b.thr + X.weight.threshold() + b.max_abs_shift + b.max_special;
  u64 joint = std::lcm(b.modulus, X.weight.period());
  for (u64 n = 1; n <= bound + joint; ++n) {
    if (X.weight.at(T(n)) > X.weight.at(n)) return false;
  }
  return true;
}

CountableWeight constant_weight(const CountableSpace&, const ComplexRational& c) {
  return {Periodic<ComplexRational>(c), Periodic<ComplexRational>(ComplexRational(0))};
}

namespace {

u64 weight_settled(const CountableWeight& u) { return std::max(u.offset.threshold(), u.slope.threshold()); }
u64 weight_period(const CountableWeight& u) { return std::lcm(u.offset.period(), u.slope.period()); }

/// |u|^2 along n = start + period * t, as a quadratic in t.
Quadratic weight_sq_along(const CountableWeight& u, u64 start, u64 period) {
  return interpolate(u(start).norm_sq(), u(start + period).norm_sq(), u(start + 2 * period).norm_sq());
}

}  // namespace

StructuredSet weight_zero_set(const CountableSpace&, const CountableWeight& u) {
  u64 settled = weight_settled(u);
  u64 period = weight_period(u);
  u64 bound = settled;
  // A class with nonzero slope vanishes at most once.
  for (u64 r = 0; r < period; ++r) {
    u64 n = first_in_class(settled, r, period);
    const ComplexRational& s = u.slope.at(n);
    if (s.is_zero()) continue;
    ComplexRational root = -(u.offset.at(n) / s);
    if (sgn(root.im) != 0 || sgn(root.re) <= 0 || root.re.get_den() != 1) continue;
    bound = std::max(bound, static_cast<u64>(root.re.get_num().get_ui()));
  }
  return {Periodic<bool>::tabulate(bound, period, [&](u64 n) { return u(n).is_zero(); })};
}

CountableWeight restrict_weight(const CountableSpace&, const CountableWeight& u, const StructuredSet& s) {
  auto cut = [&](const Periodic<ComplexRational>& v) {
    u64 thr = std::max(v.threshold(), s.bits.threshold());
    u64 per = std::lcm(v.period(), s.bits.period());
    return Periodic<ComplexRational>::tabulate(
        thr, per, [&](u64 n) { return s.bits.at(n) ? v.at(n) : ComplexRational(0); });
  };
  return {cut(u.offset), cut(u.slope)};
}

std::optional<std::vector<std::pair<ComplexRational, StructuredSet>>> weight_levels(const CountableSpace&,
                                                                                   const CountableWeight& u) {
  if (!u.is_simple()) return std::nullopt;
  std::vector<std::pair<ComplexRational, StructuredSet>> out;
  for (const ComplexRational& c : u.offset.values()) {
    if (c.is_zero()) continue;
    out.emplace_back(c, StructuredSet{u.offset.map([&](const ComplexRational& v) { return v == c; })});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::optional<Rational> weight_ess_sup_sq(const CountableSpace&, const CountableWeight& u) {
  if (!all_tail_zero(u.slope)) return std::nullopt;
  u64 settled = weight_settled(u);
  u64 period = weight_period(u);
  Rational best = 0;
  for (u64 n = 1; n <= settled + period; ++n) best = std::max(best, u(n).norm_sq());
  return best;
}

Rational weight_ess_inf_sq(const CountableSpace&, const CountableWeight& u) {
  u64 settled = weight_settled(u);
  u64 period = weight_period(u);
  Rational best = u(1).norm_sq();
  for (u64 n = 1; n <= settled; ++n) best = std::min(best, u(n).norm_sq());
  for (u64 r = 0; r < period; ++r) {
    u64 start = first_in_class(settled, r, period);
    auto m = min_over_naturals(weight_sq_along(u, start, period));
    if (m) best = std::min(best, *m);
  }
  return best;
}

bool eps_sets_invariant(const CountableSpace&, const TailResidueMap& T, const CountableWeight& u) {
  MapBounds b = bounds_of(T);
  u64 settled = b.thr + weight_settled(u) + b.max_abs_shift + b.max_special;
  u64 period = std::lcm(b.modulus, weight_period(u));
  auto gap = [&](u64 n) -> Rational { return u(T(n)).norm_sq() - u(n).norm_sq(); };
  for (u64 n = 1; n <= settled; ++n) {
    if (sgn(gap(n)) < 0) return false;
  }
  // Beyond `settled` the gap is a quadratic along each residue class.
  for (u64 r = 0; r < period; ++r) {
    u64 start = first_in_class(settled, r, period);
    Quadratic q = interpolate(gap(start), gap(start + period), gap(start + 2 * period));
    auto m = min_over_naturals(q);
    if (!m || sgn(*m) < 0) return false;
  }
  return true;
}

namespace {

u64 collision_bound(const TailResidueMap& T, const StructuredSet& s) {
  MapBounds b = bounds_of(T);
  u64 joint = std::lcm(b.modulus, s.bits.period());
  return std::max({b.thr, s.bits.threshold(), b.max_special}) + 2 * b.max_abs_shift + joint + b.modulus + 1;
}

}  // namespace

StructuredSet collision_set(const CountableSpace&, const TailResidueMap& T, const StructuredSet& s) {
  u64 joint = std::lcm(T.modulus(), s.bits.period());
  return {Periodic<bool>::tabulate(collision_bound(T, s), joint, [&](u64 n) {
    return s.contains(n) && fiber_in(T, T(n), s, 2).size() >= 2;
  })};
}

StructuredSet non_representative_set(const CountableSpace&, const TailResidueMap& T, const StructuredSet& s) {
  u64 joint = std::lcm(T.modulus(), s.bits.period());
  return {Periodic<bool>::tabulate(collision_bound(T, s), joint, [&](u64 n) {
    if (!s.contains(n)) return false;
    auto fib = fiber_in(T, T(n), s, 1);
    return !fib.empty() && fib[0] < n;
  })};
}

std::vector<FamilyNode<StructuredSet>> family_roots(const CountableSpace&, const FamilyOptions& opt) {
  std::vector<FamilyNode<StructuredSet>> out;
  for (u64 n = 1; n <= opt.atom_bound; ++n) out.push_back({make_structured_set({n}), 0});
  for (u64 q = 1; q <= opt.max_modulus; ++q) {
    for (u64 j = 0; j < q; ++j) out.push_back({residue_tail(0, j, q), 0});
  }
  return out;
}

std::vector<FamilyNode<StructuredSet>> family_children(const CountableSpace&, const FamilyNode<StructuredSet>&,
                                                       const FamilyOptions&) {
  return {};
}

std::vector<StructuredSet> atoms_of(const CountableSpace&, const StructuredSet& a) {
  std::vector<StructuredSet> out;
  for (u64 n = 1; n <= a.bits.threshold() + a.bits.period(); ++n) {
    if (a.contains(n)) out.push_back(make_structured_set({n}));
  }
  return out;
}

std::string describe(const CountableSpace&, const StructuredSet& a) {
  std::string finite;
  for (u64 n = 1; n <= a.bits.threshold(); ++n) {
    if (!a.contains(n)) continue;
    if (!finite.empty()) finite += ",";
    finite += std::to_string(n);
  }
  std::vector<u64> classes;
  for (u64 r = 0; r < a.bits.period(); ++r) {
    if (a.bits.tail()[r]) classes.push_back(r);
  }
  std::string out = "{" + finite + "}";
  if (classes.empty()) return out;
  std::string tail = "{n>" + std::to_string(a.bits.threshold());
  if (a.bits.period() > 1) {
    tail += " : n mod " + std::to_string(a.bits.period()) + " in {";
    for (std::size_t i = 0; i < classes.size(); ++i) tail += (i ? "," : "") + std::to_string(classes[i]);
    tail += "}";
  }
  tail += "}";
  return finite.empty() ? tail : out + " u " + tail;
}

std::string describe(const CountableSpace&, const TailResidueMap& T) {
  std::string out;
  for (u64 n = 1; n <= T.threshold(); ++n) {
    out += std::to_string(n) + "->" + std::to_string(T.head[n - 1]) + ", ";
  }
  out += "n>" + std::to_string(T.threshold()) + ": ";
  for (u64 j = 0; j < T.modulus(); ++j) {
    const TailRule& rule = T.rules[j];
    if (j) out += "; ";
    out += "[" + std::to_string(j) + " mod " + std::to_string(T.modulus()) + "] ";
    if (rule.kind == TailRule::Kind::Shift) {
      out += "n" + std::string(rule.value < 0 ? "" : "+") + std::to_string(rule.value);
    } else {
      out += "const " + std::to_string(rule.value);
    }
  }
  return out;
}

std::string describe(const CountableSpace&, const CountableWeight& u) {
  std::string out;
  u64 settled = weight_settled(u);
  for (u64 n = 1; n <= settled; ++n) out += std::to_string(n) + ":" + to_string(u(n)) + ", ";
  u64 period = weight_period(u);
  out += "n>" + std::to_string(settled) + ": ";
  for (u64 r = 0; r < period; ++r) {
    u64 n = first_in_class(settled, r, period);
    if (r) out += "; ";
    out += "[" + std::to_string(r) + " mod " + std::to_string(period) + "] ";
    const ComplexRational& s = u.slope.at(n);
    out += s.is_zero() ? to_string(u.offset.at(n)) : "(" + to_string(s) + ")n+" + to_string(u.offset.at(n));
  }
  return out;
}

}  // namespace lorentz_ops
