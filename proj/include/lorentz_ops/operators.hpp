#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/errors.hpp"
#include "lorentz_ops/spaces.hpp"

namespace lorentz_ops {

enum class OperatorKind { Mu, Ct, Wut, WutHat };

std::string to_string(OperatorKind k);
OperatorKind parse_operator_kind(const std::string& text);

/// Mu: f -> u f.  Ct: f -> f o T.  Wut: f -> (u o T)(f o T).  WutHat: f -> u (f o T).
/// Mu ignores T and Ct ignores u; both are stored as identity / constant 1.
template <class S>
struct OperatorSpec {
  OperatorKind kind = OperatorKind::Wut;
  S space;
  MapOf<S> T;
  WeightOf<S> u;

  static OperatorSpec multiplication(S X, WeightOf<S> u) {
    MapOf<S> id = identity_map(X);
    return {OperatorKind::Mu, std::move(X), std::move(id), std::move(u)};
  }
  static OperatorSpec composition(S X, MapOf<S> T) {
    WeightOf<S> one = constant_weight(X, ComplexRational(1));
    return {OperatorKind::Ct, std::move(X), std::move(T), std::move(one)};
  }
  static OperatorSpec weighted(S X, MapOf<S> T, WeightOf<S> u, bool hat = false) {
    return {hat ? OperatorKind::WutHat : OperatorKind::Wut, std::move(X), std::move(T), std::move(u)};
  }
  bool hat() const { return kind == OperatorKind::WutHat; }
  bool operator==(const OperatorSpec&) const = default;
  /// Same (u, T) with another action.
  OperatorSpec with_kind(OperatorKind k) const {
    OperatorSpec out = *this;
    out.kind = k;
    if (k == OperatorKind::Ct) out.u = constant_weight(space, ComplexRational(1));
    if (k == OperatorKind::Mu) out.T = identity_map(space);
    return out;
  }
};

namespace detail {

template <class S>
std::vector<std::pair<ComplexRational, SetOf<S>>> levels_on(const S& X, const WeightOf<S>& u, const SetOf<S>& a) {
  auto lv = weight_levels(X, restrict_weight(X, u, a));
  if (!lv) throw NonSimpleResult("weight is not simple on the support of the argument");
  return *lv;
}

}  // namespace detail

/// One application L f.
template <class S>
SimpleFunction<S> apply_once(const OperatorSpec<S>& op, const SimpleFunction<S>& f) {
  const S& X = op.space;
  SimpleFunction<S> out;
  for (const auto& [d, a] : f.pieces) {
    switch (op.kind) {
      case OperatorKind::Ct:
        out.pieces.emplace_back(d, preimage1(X, op.T, a));
        break;
      case OperatorKind::Mu:
        for (auto& [c, ac] : detail::levels_on(X, op.u, a)) out.pieces.emplace_back(c * d, ac);
        break;
      case OperatorKind::Wut:
        for (auto& [c, ac] : detail::levels_on(X, op.u, a)) out.pieces.emplace_back(c * d, preimage1(X, op.T, ac));
        break;
      case OperatorKind::WutHat:
        for (auto& [c, ac] : detail::levels_on(X, op.u, preimage1(X, op.T, a))) out.pieces.emplace_back(c * d, ac);
        break;
    }
  }
  return normalize(X, out);
}

/// L^k f; k = 0 returns f. Throws NonSimpleResult.
template <class S>
SimpleFunction<S> apply(const OperatorSpec<S>& op, SimpleFunction<S> f, unsigned k) {
  f = normalize(op.space, f);
  for (unsigned i = 0; i < k; ++i) f = apply_once(op, f);
  return f;
}

/// N_k: points where every weight factor of L^k is nonzero. Wut: u(T^i x) != 0
/// for 1 <= i <= k. WutHat: for 0 <= i <= k-1. N_0 = X.
template <class S>
SetOf<S> nonvanishing_set(const OperatorSpec<S>& op, unsigned k) {
  const S& X = op.space;
  SetOf<S> supp = complement(X, weight_zero_set(X, op.u));
  SetOf<S> n = full_set(X);
  for (unsigned i = 0; i < k; ++i) {
    n = op.hat() ? intersect(supp, preimage1(X, op.T, n)) : preimage1(X, op.T, intersect(supp, n));
  }
  return n;
}

/// Support of L^k f for f with the given support.
template <class S>
SetOf<S> power_support(const OperatorSpec<S>& op, const SetOf<S>& supp_f, unsigned k) {
  return intersect(nonvanishing_set(op, k), preimage(op.space, op.T, supp_f, k));
}

struct BoundednessReport {
  bool u_ess_bounded = false;
  bool hT_ess_bounded = false;
  std::optional<bool> eps_sets_invariant;
  bool nonsingular = false;
  enum class Verdict { Bounded, NotBounded, Inconclusive } verdict = Verdict::Inconclusive;
};

std::string to_string(BoundednessReport::Verdict v);

namespace detail {
inline std::optional<bool> tri(bool b) { return b; }
inline std::optional<bool> tri(std::optional<bool> b) { return b; }
}  // namespace detail

template <class S>
BoundednessReport boundedness_report(const OperatorSpec<S>& op) {
  const S& X = op.space;
  BoundednessReport r;
  r.u_ess_bounded = weight_ess_sup_sq(X, op.u).has_value();
  r.nonsingular = is_nonsingular(X, op.T);
  if (r.nonsingular) {
    try {
      r.hT_ess_bounded = density_bounded(X, radon_nikodym(X, op.T, 1));
    } catch (const InfiniteAtomMass&) {
      r.hT_ess_bounded = false;
    }
  }
  r.eps_sets_invariant = detail::tri(eps_sets_invariant(X, op.T, op.u));
  if (r.u_ess_bounded && r.hT_ess_bounded && r.nonsingular) {
    r.verdict = BoundednessReport::Verdict::Bounded;
  } else if (r.nonsingular && r.hT_ess_bounded && r.eps_sets_invariant == true && !r.u_ess_bounded) {
    r.verdict = BoundednessReport::Verdict::NotBounded;
  }
  return r;
}

/// Dense complex-rational matrix; row x, column y holds the coefficient of
/// f(y) in (L f)(x).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ComplexRational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  static Matrix identity(std::size_t n);
  ComplexRational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const ComplexRational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool operator==(const Matrix&) const = default;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<ComplexRational> operator*(const Matrix& a, const std::vector<ComplexRational>& v);
Matrix power(const Matrix& a, unsigned k);

Matrix matrix(const OperatorSpec<FiniteSpace>& op);
std::vector<ComplexRational> to_vector(const FiniteSpace& X, const SimpleFunction<FiniteSpace>& f);
SimpleFunction<FiniteSpace> from_vector(const FiniteSpace& X, const std::vector<ComplexRational>& v);

}  // namespace lorentz_ops
