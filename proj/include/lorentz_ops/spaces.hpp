#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/continuum.hpp"
#include "lorentz_ops/countable.hpp"
#include "lorentz_ops/finite.hpp"

namespace lorentz_ops {

enum class EngineKind { Finite, Countable, Interval };

template <class Space>
struct Engine;

template <>
struct Engine<FiniteSpace> {
  using Set = AtomSet;
  using Map = AtomMap;
  using Weight = FiniteWeight;
  using Measure = FiniteMeasure;
  using Density = FiniteDensity;
  static constexpr EngineKind kind = EngineKind::Finite;
  static constexpr const char* name = "finite";
};

template <>
struct Engine<CountableSpace> {
  using Set = StructuredSet;
  using Map = TailResidueMap;
  using Weight = CountableWeight;
  using Measure = CountableMeasure;
  using Density = CountableDensity;
  static constexpr EngineKind kind = EngineKind::Countable;
  static constexpr const char* name = "countable";
};

template <>
struct Engine<IntervalSpace> {
  using Set = IntervalUnion;
  using Map = PiecewiseAffineMap;
  using Weight = IntervalWeight;
  using Measure = IntervalMeasure;
  using Density = IntervalDensity;
  static constexpr EngineKind kind = EngineKind::Interval;
  static constexpr const char* name = "interval";
};

template <class S>
using SetOf = typename Engine<S>::Set;
template <class S>
using MapOf = typename Engine<S>::Map;
template <class S>
using WeightOf = typename Engine<S>::Weight;
template <class S>
using MeasureOf = typename Engine<S>::Measure;
template <class S>
using DensityOf = typename Engine<S>::Density;

inline void ensure_finite(const FiniteSpace&, const FiniteMeasure&) {}
inline void ensure_finite(const IntervalSpace&, const IntervalMeasure&) {}
inline void ensure_finite(const CountableSpace& X, const CountableMeasure& m) { (void)density_of(X, m); }

template <class S>
bool is_null(const S& X, const SetOf<S>& a) {
  return measure_of(X, a).is_zero();
}

/// a is contained in b up to a null set.
template <class S>
bool subset_ae(const S& X, const SetOf<S>& a, const SetOf<S>& b) {
  return is_null(X, minus(a, b));
}

template <class S>
bool equal_ae(const S& X, const SetOf<S>& a, const SetOf<S>& b) {
  return subset_ae(X, a, b) && subset_ae(X, b, a);
}

template <class S>
SetOf<S> complement(const S& X, const SetOf<S>& a) {
  return minus(full_set(X), a);
}

/// T^{-k}(A); k = 0 returns A.
template <class S>
SetOf<S> preimage(const S& X, const MapOf<S>& T, SetOf<S> a, unsigned k) {
  for (unsigned i = 0; i < k; ++i) a = preimage1(X, T, a);
  return a;
}

/// T^k(A) mod null.
template <class S>
SetOf<S> forward_image(const S& X, const MapOf<S>& T, SetOf<S> a, unsigned k) {
  for (unsigned i = 0; i < k; ++i) a = image1(X, T, a);
  return a;
}

/// mu_k = mu o T^{-k}. Throws InfiniteAtomMass or NotAbsolutelyContinuous.
template <class S>
MeasureOf<S> pushforward(const S& X, const MapOf<S>& T, unsigned k) {
  MeasureOf<S> m = base_measure(X);
  for (unsigned i = 0; i < k; ++i) m = push_measure(X, T, m);
  ensure_finite(X, m);
  return m;
}

/// h_{T^k} = d(mu_k)/d(mu).
template <class S>
DensityOf<S> radon_nikodym(const S& X, const MapOf<S>& T, unsigned k) {
  return density_of(X, pushforward(X, T, k));
}

/// nu << mu, both given by densities against the base measure.
template <class S>
bool abs_continuous(const S& X, const MeasureOf<S>& nu, const MeasureOf<S>& mu) {
  return subset_ae(X, zero_set(X, density_of(X, mu)), zero_set(X, density_of(X, nu)));
}

template <class S>
bool equivalent(const S& X, const MeasureOf<S>& nu, const MeasureOf<S>& mu) {
  return abs_continuous(X, nu, mu) && abs_continuous(X, mu, nu);
}

/// Fiber classes {y in s : T(y) = T(x)} of positive measure, by atoms (the
/// countable engine stops at the structured part of s).
template <class S>
std::vector<SetOf<S>> fiber_classes(const S& X, const MapOf<S>& T, const SetOf<S>& s) {
  std::vector<SetOf<S>> out;
  SetOf<S> seen = empty_set(X);
  for (const SetOf<S>& atom : atoms_of(X, s)) {
    if (!is_null(X, intersect(seen, atom))) continue;
    SetOf<S> cls = intersect(s, preimage1(X, T, image1(X, T, atom)));
    seen = unite(seen, cls);
    out.push_back(std::move(cls));
  }
  return out;
}

/// Finite sum of (value, set) pairs with pairwise disjoint sets; zero off
/// their union.
template <class S>
struct SimpleFunction {
  std::vector<std::pair<ComplexRational, SetOf<S>>> pieces;
};

/// Drops zero values and null pieces, merges equal values, sorts by value.
template <class S>
SimpleFunction<S> normalize(const S& X, const SimpleFunction<S>& f) {
  SimpleFunction<S> out;
  for (const auto& [c, a] : f.pieces) {
    if (c.is_zero() || is_null(X, a)) continue;
    auto it = std::find_if(out.pieces.begin(), out.pieces.end(), [&](const auto& p) { return p.first == c; });
    if (it == out.pieces.end()) {
      out.pieces.emplace_back(c, a);
    } else {
      it->second = unite(it->second, a);
    }
  }
  std::sort(out.pieces.begin(), out.pieces.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template <class S>
SimpleFunction<S> indicator(const SetOf<S>& a, const ComplexRational& c = ComplexRational(1)) {
  return SimpleFunction<S>{{{c, a}}};
}

template <class S>
SetOf<S> support(const S& X, const SimpleFunction<S>& f) {
  SetOf<S> out = empty_set(X);
  for (const auto& [c, a] : f.pieces) {
    if (!c.is_zero()) out = unite(out, a);
  }
  return out;
}

/// f = g almost everywhere.
template <class S>
bool equal_ae(const S& X, const SimpleFunction<S>& f, const SimpleFunction<S>& g) {
  SimpleFunction<S> a = normalize(X, f);
  SimpleFunction<S> b = normalize(X, g);
  if (a.pieces.size() != b.pieces.size()) return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    if (!(a.pieces[i].first == b.pieces[i].first) || !equal_ae(X, a.pieces[i].second, b.pieces[i].second)) {
      return false;
    }
  }
  return true;
}

template <class S>
SimpleFunction<S> linear_combination(const S& X, const ComplexRational& a, const SimpleFunction<S>& f,
                                     const ComplexRational& b, const SimpleFunction<S>& g) {
  // Refine to the common partition of the two supports.
  SimpleFunction<S> out;
  SetOf<S> sf = support(X, f);
  SetOf<S> sg = support(X, g);
  for (const auto& [c, s] : f.pieces) {
    out.pieces.emplace_back(a * c, minus(s, sg));
    for (const auto& [d, t] : g.pieces) out.pieces.emplace_back(a * c + b * d, intersect(s, t));
  }
  for (const auto& [d, t] : g.pieces) out.pieces.emplace_back(b * d, minus(t, sf));
  return normalize(X, out);
}

}  // namespace lorentz_ops
