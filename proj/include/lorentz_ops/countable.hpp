#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/errors.hpp"
#include "lorentz_ops/family.hpp"
#include "lorentz_ops/periodic.hpp"
#include "lorentz_ops/rational.hpp"

namespace lorentz_ops {

/// Atoms 1, 2, ... with exceptional masses up to a threshold and a common
/// tail mass beyond it.
struct CountableSpace {
  Periodic<Rational> weight;

  CountableSpace() : weight(Rational(1)) {}
  CountableSpace(std::uint64_t threshold, const std::map<std::uint64_t, Rational>& exceptions,
                 const Rational& tail_weight);
  static CountableSpace counting() { return {}; }
  bool operator==(const CountableSpace&) const = default;
};

/// Finite set of indices plus residue classes beyond a threshold.
struct StructuredSet {
  Periodic<bool> bits;
  bool operator==(const StructuredSet&) const = default;
  bool contains(std::uint64_t n) const { return bits.at(n); }
};

struct TailRule {
  enum class Kind { Shift, Constant };
  Kind kind = Kind::Shift;
  /// Shift amount c (n -> n + c) or the constant image.
  std::int64_t value = 0;
  bool operator==(const TailRule&) const = default;
};

/// n -> head[n-1] for n <= threshold; n -> rule[n mod modulus] beyond.
struct TailResidueMap {
  std::vector<std::uint64_t> head;
  std::vector<TailRule> rules;

  TailResidueMap() : rules{TailRule{}} {}
  /// Exceptions may omit indices; those follow the rule of their class.
  TailResidueMap(std::uint64_t threshold, const std::map<std::uint64_t, std::uint64_t>& exceptions,
                 std::vector<TailRule> rules);

  std::uint64_t threshold() const { return head.size(); }
  std::uint64_t modulus() const { return rules.size(); }
  std::uint64_t operator()(std::uint64_t n) const;
  const TailRule& rule_for(std::uint64_t n) const { return rules[n % rules.size()]; }
  bool operator==(const TailResidueMap&) const = default;
};

/// u(n) = offset(n) + slope(n) * n. A nonzero slope makes u unbounded.
struct CountableWeight {
  Periodic<ComplexRational> offset;
  Periodic<ComplexRational> slope;

  ComplexRational operator()(std::uint64_t n) const {
    return offset.at(n) + slope.at(n) * ComplexRational(Rational(static_cast<unsigned long>(n)));
  }
  bool is_simple() const { return slope.threshold() == 0 && slope.tail().size() == 1 && slope.tail()[0].is_zero(); }
  bool operator==(const CountableWeight&) const = default;
};

struct CountableMeasure {
  Periodic<ExtRational> mass;
  bool operator==(const CountableMeasure&) const = default;
};

struct CountableDensity {
  Periodic<Rational> value;
  bool operator==(const CountableDensity&) const = default;
};

StructuredSet make_structured_set(const std::vector<std::uint64_t>& members);
/// {n > from : n = residue mod modulus}.
StructuredSet residue_tail(std::uint64_t from, std::uint64_t residue, std::uint64_t modulus);

StructuredSet empty_set(const CountableSpace& X);
StructuredSet full_set(const CountableSpace& X);
StructuredSet unite(const StructuredSet& a, const StructuredSet& b);
StructuredSet intersect(const StructuredSet& a, const StructuredSet& b);
StructuredSet minus(const StructuredSet& a, const StructuredSet& b);
ExtRational measure_of(const CountableSpace& X, const StructuredSet& a);

void validate(const CountableSpace& X, const TailResidueMap& T);
TailResidueMap identity_map(const CountableSpace& X);
StructuredSet preimage1(const CountableSpace& X, const TailResidueMap& T, const StructuredSet& a);
StructuredSet image1(const CountableSpace& X, const TailResidueMap& T, const StructuredSet& a);

CountableMeasure base_measure(const CountableSpace& X);
/// Exact pushforward; atoms may receive +inf from constant tail rules.
CountableMeasure push_measure(const CountableSpace& X, const TailResidueMap& T, const CountableMeasure& m);
ExtRational measure_of(const CountableSpace& X, const CountableMeasure& m, const StructuredSet& a);
/// Throws InfiniteAtomMass when some atom carries +inf.
CountableDensity density_of(const CountableSpace& X, const CountableMeasure& m);
StructuredSet zero_set(const CountableSpace& X, const CountableDensity& d);
bool density_bounded(const CountableSpace& X, const CountableDensity& d);
bool is_nonsingular(const CountableSpace& X, const TailResidueMap& T);
bool measure_nonincreasing_forward(const CountableSpace& X, const TailResidueMap& T);

CountableWeight constant_weight(const CountableSpace& X, const ComplexRational& c);
StructuredSet weight_zero_set(const CountableSpace& X, const CountableWeight& u);
CountableWeight restrict_weight(const CountableSpace& X, const CountableWeight& u, const StructuredSet& s);
std::optional<std::vector<std::pair<ComplexRational, StructuredSet>>> weight_levels(const CountableSpace& X,
                                                                                   const CountableWeight& u);
std::optional<Rational> weight_ess_sup_sq(const CountableSpace& X, const CountableWeight& u);
Rational weight_ess_inf_sq(const CountableSpace& X, const CountableWeight& u);
bool eps_sets_invariant(const CountableSpace& X, const TailResidueMap& T, const CountableWeight& u);

StructuredSet collision_set(const CountableSpace& X, const TailResidueMap& T, const StructuredSet& s);
StructuredSet non_representative_set(const CountableSpace& X, const TailResidueMap& T, const StructuredSet& s);

std::vector<FamilyNode<StructuredSet>> family_roots(const CountableSpace& X, const FamilyOptions& opt);
std::vector<FamilyNode<StructuredSet>> family_children(const CountableSpace& X,
                                                       const FamilyNode<StructuredSet>& node,
                                                       const FamilyOptions& opt);
std::vector<StructuredSet> atoms_of(const CountableSpace& X, const StructuredSet& a);

std::string describe(const CountableSpace& X, const StructuredSet& a);
std::string describe(const CountableSpace& X, const TailResidueMap& T);
std::string describe(const CountableSpace& X, const CountableWeight& u);

}  // namespace lorentz_ops
