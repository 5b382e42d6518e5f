#include "lorentz_ops/finite.hpp"

#include <algorithm>
#include <set>

namespace lorentz_ops {

FiniteSpace::FiniteSpace(std::vector<std::string> n, std::vector<Rational> w)
    : names(std::move(n)), weights(std::move(w)) {
  if (weights.empty()) throw ValidationError("finite space needs at least one atom");
  if (names.size() != weights.size()) throw ValidationError("atom names and weights differ in length");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (sgn(weights[i]) <= 0) throw ValidationError("weight must be positive (atom " + names[i] + ")");
    if (!seen.insert(names[i]).second) throw ValidationError("duplicate atom id " + names[i]);
  }
}

FiniteSpace FiniteSpace::uniform(std::size_t n, const Rational& w) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  return FiniteSpace(std::move(names), std::vector<Rational>(n, w));
}

std::size_t FiniteSpace::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ValidationError("unknown atom " + name);
  return static_cast<std::size_t>(it - names.begin());
}

AtomSet make_atom_set(const FiniteSpace& X, const std::vector<std::size_t>& members) {
  AtomSet s = empty_set(X);
  for (std::size_t i : members) {
    if (i >= X.size()) throw ValidationError("atom index out of range");
    s.bits[i] = true;
  }
  return s;
}

void validate(const FiniteSpace& X, const AtomMap& T) {
  if (T.image.size() != X.size()) throw ValidationError("map must be total on the atoms");
  for (std::size_t y : T.image) {
    if (y >= X.size()) throw ValidationError("map image outside the space");
  }
}

void validate(const FiniteSpace& X, const FiniteWeight& u) {
  if (u.values.size() != X.size()) throw ValidationError("weight must be given on every atom");
}

AtomSet empty_set(const FiniteSpace& X) { return {std::vector<bool>(X.size(), false)}; }
AtomSet full_set(const FiniteSpace& X) { return {std::vector<bool>(X.size(), true)}; }

AtomSet unite(const AtomSet& a, const AtomSet& b) {
  AtomSet out = a;
  for (std::size_t i = 0; i < b.bits.size(); ++i) out.bits[i] = a.bits[i] || b.bits[i];
  return out;
}

AtomSet intersect(const AtomSet& a, const AtomSet& b) {
  AtomSet out = a;
  for (std::size_t i = 0; i < b.bits.size(); ++i) out.bits[i] = a.bits[i] && b.bits[i];
  return out;
}

AtomSet minus(const AtomSet& a, const AtomSet& b) {
  AtomSet out = a;
  for (std::size_t i = 0; i < b.bits.size(); ++i) out.bits[i] = a.bits[i] && !b.bits[i];
  return out;
}

ExtRational measure_of(const FiniteSpace& X, const AtomSet& a) {
  Rational total = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (a.bits[i]) total += X.weights[i];
  }
  return total;
}

AtomMap identity_map(const FiniteSpace& X) {
  AtomMap T;
  for (std::size_t i = 0; i < X.size(); ++i) T.image.push_back(i);
  return T;
}

AtomSet preimage1(const FiniteSpace& X, const AtomMap& T, const AtomSet& a) {
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) out.bits[i] = a.bits[T.image[i]];
  return out;
}

AtomSet image1(const FiniteSpace& X, const AtomMap& T, const AtomSet& a) {
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (a.bits[i]) out.bits[T.image[i]] = true;
  }
  return out;
}

FiniteMeasure base_measure(const FiniteSpace& X) { return {X.weights}; }

FiniteMeasure push_measure(const FiniteSpace& X, const AtomMap& T, const FiniteMeasure& m) {
  FiniteMeasure out{std::vector<Rational>(X.size(), Rational(0))};
  for (std::size_t i = 0; i < X.size(); ++i) out.mass[T.image[i]] += m.mass[i];
  return out;
}

ExtRational measure_of(const FiniteSpace& X, const FiniteMeasure& m, const AtomSet& a) {
  Rational total = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (a.bits[i]) total += m.mass[i];
  }
  return total;
}

FiniteDensity density_of(const FiniteSpace& X, const FiniteMeasure& m) {
  FiniteDensity d;
  for (std::size_t i = 0; i < X.size(); ++i) d.value.push_back(m.mass[i] / X.weights[i]);
  return d;
}

AtomSet zero_set(const FiniteSpace& X, const FiniteDensity& d) {
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) out.bits[i] = sgn(d.value[i]) == 0;
  return out;
}

bool density_bounded(const FiniteSpace&, const FiniteDensity&) { return true; }

bool is_nonsingular(const FiniteSpace&, const AtomMap&) { return true; }

bool measure_nonincreasing_forward(const FiniteSpace& X, const AtomMap& T) {
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X.weights[T.image[i]] > X.weights[i]) return false;
  }
  return true;
}

FiniteWeight constant_weight(const FiniteSpace& X, const ComplexRational& c) {
  return {std::vector<ComplexRational>(X.size(), c)};
}

AtomSet weight_zero_set(const FiniteSpace& X, const FiniteWeight& u) {
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) out.bits[i] = u.values[i].is_zero();
  return out;
}

FiniteWeight restrict_weight(const FiniteSpace& X, const FiniteWeight& u, const AtomSet& s) {
  FiniteWeight out = u;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!s.bits[i]) out.values[i] = 0;
  }
  return out;
}

std::optional<std::vector<std::pair<ComplexRational, AtomSet>>> weight_levels(const FiniteSpace& X,
                                                                             const FiniteWeight& u) {
  std::vector<std::pair<ComplexRational, AtomSet>> out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const ComplexRational& c = u.values[i];
    if (c.is_zero()) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& lv) { return lv.first == c; });
    if (it == out.end()) {
      out.emplace_back(c, empty_set(X));
      it = std::prev(out.end());
    }
    it->second.bits[i] = true;
  }
  return out;
}

std::optional<Rational> weight_ess_sup_sq(const FiniteSpace& X, const FiniteWeight& u) {
  Rational best = 0;
  for (std::size_t i = 0; i < X.size(); ++i) best = std::max(best, u.values[i].norm_sq());
  return best;
}

Rational weight_ess_inf_sq(const FiniteSpace& X, const FiniteWeight& u) {
  Rational best = u.values[0].norm_sq();
  for (std::size_t i = 1; i < X.size(); ++i) best = std::min(best, u.values[i].norm_sq());
  return best;
}

bool eps_sets_invariant(const FiniteSpace& X, const AtomMap& T, const FiniteWeight& u) {
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (u.values[T.image[i]].norm_sq() < u.values[i].norm_sq()) return false;
  }
  return true;
}

AtomSet collision_set(const FiniteSpace& X, const AtomMap& T, const AtomSet& s) {
  std::vector<int> count(X.size(), 0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (s.bits[i]) ++count[T.image[i]];
  }
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) out.bits[i] = s.bits[i] && count[T.image[i]] >= 2;
  return out;
}

AtomSet non_representative_set(const FiniteSpace& X, const AtomMap& T, const AtomSet& s) {
  std::vector<bool> seen(X.size(), false);
  AtomSet out = empty_set(X);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!s.bits[i]) continue;
    if (seen[T.image[i]]) out.bits[i] = true;
    seen[T.image[i]] = true;
  }
  return out;
}

std::vector<FamilyNode<AtomSet>> family_roots(const FiniteSpace& X, const FamilyOptions& opt) {
  std::vector<FamilyNode<AtomSet>> out;
  const std::size_t n = X.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back({make_atom_set(X, {i}), 0});
  if (n <= opt.subset_atoms) {
    // Remaining subsets by size, then lexicographically.
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      if (__builtin_popcountll(m) >= 2) masks.push_back(m);
    }
    std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
      return __builtin_popcountll(a) < __builtin_popcountll(b);
    });
    for (std::uint64_t m : masks) {
      AtomSet s = empty_set(X);
      for (std::size_t i = 0; i < n; ++i) s.bits[i] = (m >> i) & 1U;
      out.push_back({s, 0});
    }
  }
  return out;
}

std::vector<FamilyNode<AtomSet>> family_children(const FiniteSpace&, const FamilyNode<AtomSet>&,
                                                 const FamilyOptions&) {
  return {};
}

std::vector<AtomSet> atoms_of(const FiniteSpace& X, const AtomSet& a) {
  std::vector<AtomSet> out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (a.bits[i]) out.push_back(make_atom_set(X, {i}));
  }
  return out;
}

std::string describe(const FiniteSpace& X, const AtomSet& a) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!a.bits[i]) continue;
    if (!first) out += ",";
    out += X.names[i];
    first = false;
  }
  return out + "}";
}

std::string describe(const FiniteSpace& X, const AtomMap& T) {
  std::string out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (i) out += ", ";
    out += X.names[i] + "->" + X.names[T.image[i]];
  }
  return out;
}

std::string describe(const FiniteSpace& X, const FiniteWeight& u) {
  std::string out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (i) out += ", ";
    out += X.names[i] + ":" + to_string(u.values[i]);
  }
  return out;
}

}  // namespace lorentz_ops
