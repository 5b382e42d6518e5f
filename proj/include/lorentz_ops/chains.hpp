#pragma once

#include <deque>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lorentz_ops/family.hpp"
#include "lorentz_ops/operators.hpp"
#include "lorentz_ops/verdict.hpp"

namespace lorentz_ops {

/// Exact rank over Q(i) by Gaussian elimination.
std::size_t rank(const Matrix& m);
/// Basis of the null space, one vector per free column of the reduced form.
std::vector<std::vector<ComplexRational>> null_space(const Matrix& m);
/// [a | b]
Matrix hconcat(const Matrix& a, const Matrix& b);
bool is_zero_vector(const std::vector<ComplexRational>& v);

struct RankChain {
  /// r_0 = n, r_1, ... through one power past the first repeat.
  std::vector<std::size_t> ranks;
  unsigned stabilization = 0;
  /// The rank after the first repeat was recomputed and matched.
  bool verified_permanent = false;
};

/// Ranks of M^k until the first repeat, plus one extra power.
RankChain rank_chain(const Matrix& m);

/// Least k with N(M^k) = N(M^{k+1}) from literal null-space bases.
unsigned kernel_basis_ascent(const Matrix& m);
/// Least k with R(M^{k+1}) = R(M^k), the inclusion checked by augmented ranks.
unsigned range_descent(const Matrix& m);

struct FiniteChainResult {
  Verdict ascent;
  Verdict descent;
  RankChain chain;
  unsigned kernel_basis_ascent = 0;
  unsigned range_descent = 0;
  /// Rank stabilization, kernel bases and range inclusion gave one k.
  bool consistent = false;
};

FiniteChainResult finite_ascent_descent(const Matrix& m);
FiniteChainResult finite_ascent_descent(const OperatorSpec<FiniteSpace>& op);

/// L^k f = 0 a.e., decided from the support N_k cap T^{-k}(supp f).
template <class S>
bool kernel_membership(const OperatorSpec<S>& op, const SimpleFunction<S>& f, unsigned k) {
  return is_null(op.space, power_support(op, support(op.space, f), k));
}

/// Breadth-first walk over the generator family. Children of a node are only
/// visited when keep(node) holds; returns the first node with accept(node).
template <class S, class Keep, class Accept>
std::optional<SetOf<S>> search_family(const S& X, const FamilyOptions& opt, Keep&& keep, Accept&& accept,
                                      std::size_t budget = 40000) {
  std::deque<FamilyNode<SetOf<S>>> queue;
  for (auto& n : family_roots(X, opt)) queue.push_back(std::move(n));
  std::size_t visited = 0;
  while (!queue.empty() && visited < budget) {
    FamilyNode<SetOf<S>> node = std::move(queue.front());
    queue.pop_front();
    ++visited;
    if (!keep(node.set)) continue;
    if (accept(node.set)) return node.set;
    for (auto& c : family_children(X, node, opt)) queue.push_back(std::move(c));
  }
  return std::nullopt;
}

/// A with 0 < mu(A) < inf, mu(N_k cap T^{-k} A) > 0, mu(N_{k+1} cap T^{-(k+1)} A) = 0,
/// so chi_A lies in N(L^{k+1}) minus N(L^k).
template <class S>
std::optional<SetOf<S>> separating_witness(const OperatorSpec<S>& op, unsigned k, const FamilyOptions& opt) {
  const S& X = op.space;
  SetOf<S> nk = nonvanishing_set(op, k);
  SetOf<S> nk1 = nonvanishing_set(op, k + 1);
  auto reaches = [&](const SetOf<S>& a) { return !is_null(X, intersect(nk, preimage(X, op.T, a, k))); };
  auto accept = [&](const SetOf<S>& a) {
    ExtRational m = measure_of(X, a);
    if (!m.is_finite() || m.is_zero()) return false;
    return is_null(X, intersect(nk1, preimage(X, op.T, a, k + 1)));
  };
  if constexpr (std::is_same_v<S, IntervalSpace>) {
    // Nonsingular affine branches send null sets to null sets and back, so A
    // separates iff it meets T^k(N_k) but not T^{k+1}(N_{k+1}).
    if (is_nonsingular(X, op.T)) {
      SetOf<S> seed = minus(forward_image(X, op.T, nk, k), forward_image(X, op.T, nk1, k + 1));
      if (is_null(X, seed)) return std::nullopt;
      for (auto& root : family_roots(X, opt)) {
        SetOf<S> a = intersect(seed, root.set);
        if (!is_null(X, a) && reaches(a) && accept(a)) return a;
      }
      // Every family member lies in a root, so the roots are exhaustive.
      return std::nullopt;
    }
  }
  return search_family(X, opt, reaches, accept);
}

template <class S>
struct HorizonChainResult {
  Verdict ascent;
  /// Infinite-dimensional range chains are not brute-forced.
  Verdict descent;
  std::vector<std::pair<unsigned, SetOf<S>>> witnesses;
};

/// Kernel chain on the generator family for k < horizon. Never Exact.
template <class S>
HorizonChainResult<S> horizon_chain(const OperatorSpec<S>& op, unsigned horizon, const FamilyOptions& opt = {}) {
  HorizonChainResult<S> out;
  out.descent = Verdict::unknown(horizon);
  out.descent.annotation = "range chain not brute-forced";
  for (unsigned k = 0; k < horizon; ++k) {
    if (auto w = separating_witness(op, k, opt)) out.witnesses.emplace_back(k, *w);
  }
  if (out.witnesses.empty()) {
    out.ascent = Verdict::unknown(horizon);
    out.ascent.annotation = "stable up to horizon";
  } else {
    out.ascent = Verdict::at_least(out.witnesses.back().first + 1);
    out.ascent.annotation = "separating witnesses replayed";
  }
  return out;
}

}  // namespace lorentz_ops
