#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/errors.hpp"
#include "lorentz_ops/family.hpp"
#include "lorentz_ops/interval.hpp"
#include "lorentz_ops/rational.hpp"

namespace lorentz_ops {

/// Finite union of intervals carrying a piecewise-constant density against
/// Lebesgue measure. The density is zero off the carrier.
struct IntervalSpace {
  IntervalUnion carrier;
  PiecewiseFn<Rational> density;

  IntervalSpace() = default;
  /// Density 1 on the carrier.
  explicit IntervalSpace(IntervalUnion carrier);
  IntervalSpace(IntervalUnion carrier, const std::vector<std::pair<Interval, Rational>>& density_pieces);
  bool operator==(const IntervalSpace&) const = default;
};

struct AffineBranch {
  Interval domain;
  Rational slope;
  Rational intercept;
  bool operator==(const AffineBranch&) const = default;
};

/// x -> a x + b on each branch domain; the domains tile the carrier mod null.
struct PiecewiseAffineMap {
  std::vector<AffineBranch> branches;
  bool operator==(const PiecewiseAffineMap&) const = default;
};

/// alpha + beta x with complex rational coefficients.
struct AffinePiece {
  ComplexRational alpha;
  ComplexRational beta;
  bool operator==(const AffinePiece&) const = default;
  bool is_zero() const { return alpha.is_zero() && beta.is_zero(); }
  bool is_constant() const { return beta.is_zero(); }
};

/// Piecewise polynomial of degree at most one. `null_note` records how the
/// function differs on a null set, which never affects any computation.
struct IntervalWeight {
  PiecewiseFn<AffinePiece> pieces;
  std::string null_note;
  bool operator==(const IntervalWeight& o) const { return pieces == o.pieces; }
};

struct IntervalMeasure {
  PiecewiseFn<Rational> density;
  bool operator==(const IntervalMeasure&) const = default;
};

struct IntervalDensity {
  PiecewiseFn<Rational> value;
  bool operator==(const IntervalDensity&) const = default;
};

void validate(const IntervalSpace& X, const PiecewiseAffineMap& T);

IntervalUnion empty_set(const IntervalSpace& X);
IntervalUnion full_set(const IntervalSpace& X);
IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion minus(const IntervalUnion& a, const IntervalUnion& b);
ExtRational measure_of(const IntervalSpace& X, const IntervalUnion& a);

PiecewiseAffineMap identity_map(const IntervalSpace& X);
IntervalUnion preimage1(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& a);
IntervalUnion image1(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& a);
PiecewiseAffineMap compose(const PiecewiseAffineMap& outer, const PiecewiseAffineMap& inner);

IntervalMeasure base_measure(const IntervalSpace& X);
/// Throws NotAbsolutelyContinuous when a constant branch carries mass.
IntervalMeasure push_measure(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalMeasure& m);
ExtRational measure_of(const IntervalSpace& X, const IntervalMeasure& m, const IntervalUnion& a);
IntervalDensity density_of(const IntervalSpace& X, const IntervalMeasure& m);
IntervalUnion zero_set(const IntervalSpace& X, const IntervalDensity& d);
bool density_bounded(const IntervalSpace& X, const IntervalDensity& d);
bool is_nonsingular(const IntervalSpace& X, const PiecewiseAffineMap& T);
bool measure_nonincreasing_forward(const IntervalSpace& X, const PiecewiseAffineMap& T);

IntervalWeight constant_weight(const IntervalSpace& X, const ComplexRational& c);
IntervalUnion weight_zero_set(const IntervalSpace& X, const IntervalWeight& u);
IntervalWeight restrict_weight(const IntervalSpace& X, const IntervalWeight& u, const IntervalUnion& s);
std::optional<std::vector<std::pair<ComplexRational, IntervalUnion>>> weight_levels(const IntervalSpace& X,
                                                                                   const IntervalWeight& u);
std::optional<Rational> weight_ess_sup_sq(const IntervalSpace& X, const IntervalWeight& u);
Rational weight_ess_inf_sq(const IntervalSpace& X, const IntervalWeight& u);
/// A point of the closure where ess inf |u| is attained, if any.
std::optional<Rational> weight_ess_inf_point(const IntervalSpace& X, const IntervalWeight& u);
/// nullopt when a constant branch of positive mass lands on a cut of u.
std::optional<bool> eps_sets_invariant(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalWeight& u);

IntervalUnion collision_set(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s);
IntervalUnion non_representative_set(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s);
/// Positive-measure fibers {y in s : T(y) = c}; only constant branches give them.
std::vector<IntervalUnion> fiber_classes(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s);

std::vector<FamilyNode<IntervalUnion>> family_roots(const IntervalSpace& X, const FamilyOptions& opt);
std::vector<FamilyNode<IntervalUnion>> family_children(const IntervalSpace& X, const FamilyNode<IntervalUnion>& node,
                                                       const FamilyOptions& opt);
std::vector<IntervalUnion> atoms_of(const IntervalSpace& X, const IntervalUnion& a);

std::string describe(const IntervalSpace& X, const IntervalUnion& a);
std::string describe(const IntervalSpace& X, const PiecewiseAffineMap& T);
std::string describe(const IntervalSpace& X, const IntervalWeight& u);

}  // namespace lorentz_ops
