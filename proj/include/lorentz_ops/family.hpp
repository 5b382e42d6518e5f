#pragma once

#include <cstdint>
#include <vector>

#include "lorentz_ops/rational.hpp"

namespace lorentz_ops {

/// Bounds for the structured generator families searched by witness finders.
struct FamilyOptions {
  /// Countable engine: singletons 1..max(atom_bound, structure size).
  std::uint64_t atom_bound = 64;
  /// Countable engine: residue tails modulo 1..max_modulus.
  std::uint64_t max_modulus = 4;
  /// Finite engine: all subsets when the atom count is at most this.
  std::size_t subset_atoms = 10;
  /// Interval engine: unit cells within [-window, window], halved up to depth.
  std::int64_t window = 8;
  int depth = 12;
};

/// A generator set plus its refinement depth (interval engine only).
template <class Set>
struct FamilyNode {
  Set set;
  int depth = 0;
  /// Left end of the dyadic cell [cell_lo, cell_lo + 2^-depth].
  Rational cell_lo = 0;
};

}  // namespace lorentz_ops
