#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/errors.hpp"
#include "lorentz_ops/family.hpp"
#include "lorentz_ops/rational.hpp"

namespace lorentz_ops {

/// Finitely many atoms with positive rational masses.
struct FiniteSpace {
  std::vector<std::string> names;
  std::vector<Rational> weights;

  FiniteSpace() = default;
  FiniteSpace(std::vector<std::string> names, std::vector<Rational> weights);
  /// Atoms named "1".."n".
  static FiniteSpace uniform(std::size_t n, const Rational& w = 1);

  std::size_t size() const { return weights.size(); }
  std::size_t index_of(const std::string& name) const;
  bool operator==(const FiniteSpace&) const = default;
};

struct AtomSet {
  std::vector<bool> bits;
  bool operator==(const AtomSet&) const = default;
  bool contains(std::size_t i) const { return bits[i]; }
};

/// Total table atom -> atom.
struct AtomMap {
  std::vector<std::size_t> image;
  bool operator==(const AtomMap&) const = default;
};

struct FiniteWeight {
  std::vector<ComplexRational> values;
  bool operator==(const FiniteWeight&) const = default;
};

/// Mass per atom.
struct FiniteMeasure {
  std::vector<Rational> mass;
  bool operator==(const FiniteMeasure&) const = default;
};

struct FiniteDensity {
  std::vector<Rational> value;
  bool operator==(const FiniteDensity&) const = default;
};

AtomSet make_atom_set(const FiniteSpace& X, const std::vector<std::size_t>& members);
void validate(const FiniteSpace& X, const AtomMap& T);
void validate(const FiniteSpace& X, const FiniteWeight& u);

AtomSet empty_set(const FiniteSpace& X);
AtomSet full_set(const FiniteSpace& X);
AtomSet unite(const AtomSet& a, const AtomSet& b);
AtomSet intersect(const AtomSet& a, const AtomSet& b);
AtomSet minus(const AtomSet& a, const AtomSet& b);
ExtRational measure_of(const FiniteSpace& X, const AtomSet& a);

AtomMap identity_map(const FiniteSpace& X);
AtomSet preimage1(const FiniteSpace& X, const AtomMap& T, const AtomSet& a);
AtomSet image1(const FiniteSpace& X, const AtomMap& T, const AtomSet& a);

FiniteMeasure base_measure(const FiniteSpace& X);
FiniteMeasure push_measure(const FiniteSpace& X, const AtomMap& T, const FiniteMeasure& m);
ExtRational measure_of(const FiniteSpace& X, const FiniteMeasure& m, const AtomSet& a);
FiniteDensity density_of(const FiniteSpace& X, const FiniteMeasure& m);
AtomSet zero_set(const FiniteSpace& X, const FiniteDensity& d);
bool density_bounded(const FiniteSpace& X, const FiniteDensity& d);
bool is_nonsingular(const FiniteSpace& X, const AtomMap& T);
bool measure_nonincreasing_forward(const FiniteSpace& X, const AtomMap& T);

FiniteWeight constant_weight(const FiniteSpace& X, const ComplexRational& c);
AtomSet weight_zero_set(const FiniteSpace& X, const FiniteWeight& u);
/// u on s, zero elsewhere.
FiniteWeight restrict_weight(const FiniteSpace& X, const FiniteWeight& u, const AtomSet& s);
std::optional<std::vector<std::pair<ComplexRational, AtomSet>>> weight_levels(const FiniteSpace& X,
                                                                             const FiniteWeight& u);
std::optional<Rational> weight_ess_sup_sq(const FiniteSpace& X, const FiniteWeight& u);
Rational weight_ess_inf_sq(const FiniteSpace& X, const FiniteWeight& u);
/// T(A_eps) is contained in A_eps for every eps > 0, A_eps = {|u| > eps}.
bool eps_sets_invariant(const FiniteSpace& X, const AtomMap& T, const FiniteWeight& u);

/// Points of s sharing their T-image with another point of s.
AtomSet collision_set(const FiniteSpace& X, const AtomMap& T, const AtomSet& s);
/// Points of the collision set having a smaller mate in s (non-representatives).
AtomSet non_representative_set(const FiniteSpace& X, const AtomMap& T, const AtomSet& s);

std::vector<FamilyNode<AtomSet>> family_roots(const FiniteSpace& X, const FamilyOptions& opt);
std::vector<FamilyNode<AtomSet>> family_children(const FiniteSpace& X, const FamilyNode<AtomSet>& node,
                                                 const FamilyOptions& opt);
/// One member of each block of a measurable partition into atoms.
std::vector<AtomSet> atoms_of(const FiniteSpace& X, const AtomSet& a);

std::string describe(const FiniteSpace& X, const AtomSet& a);
std::string describe(const FiniteSpace& X, const AtomMap& T);
std::string describe(const FiniteSpace& X, const FiniteWeight& u);

}  // namespace lorentz_ops
