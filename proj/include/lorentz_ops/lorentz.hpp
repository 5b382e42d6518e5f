#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ops/rational.hpp"
#include "lorentz_ops/spaces.hpp"

namespace lorentz_ops {

/// Admissible pairs: 1 < p < inf with 1 <= q < inf, or 1 < p <= inf with q = inf.
class LorentzIndex {
 public:
  /// Throws ValidationError outside the admissible range.
  LorentzIndex(ExtRational p, ExtRational q);
  const ExtRational& p() const { return p_; }
  const ExtRational& q() const { return q_; }
  bool p_infinite() const { return p_.is_pos_inf(); }
  bool q_infinite() const { return q_.is_pos_inf(); }
  Real p_real() const { return p_.to_real(); }
  Real q_real() const { return q_.to_real(); }
  /// Conjugate exponent p' = p / (p - 1); 1 when p = inf.
  ExtRational p_conjugate() const;
  /// q when q is a positive integer.
  std::optional<unsigned> q_integer() const;
  bool operator==(const LorentzIndex&) const = default;

 private:
  ExtRational p_;
  ExtRational q_;
};

std::string to_string(const LorentzIndex& idx);

/// |h| levels: (|c|^2, measure of {h = c}) sorted by decreasing |c|.
struct LevelProfile {
  std::vector<std::pair<Rational, ExtRational>> levels;
};

/// Non-negative real stored through its exact square.
struct Magnitude {
  Rational sq;
  Real value() const;
  std::optional<Rational> exact() const { return exact_sqrt(sq); }
  bool operator==(const Magnitude&) const = default;
};

/// h* on (0, inf): value[i] on [t_{i-1}, t_i) with t_0 = 0, zero after the
/// last breakpoint. The last breakpoint may be +inf.
struct StepFunction {
  std::vector<ExtRational> breaks;
  std::vector<Magnitude> values;
  /// h*(t) for t >= 0.
  Magnitude at(const Rational& t) const;
  ExtRational support_length() const { return breaks.empty() ? ExtRational(0) : breaks.back(); }
};

/// Norm or quasi-norm value. `exact_power` is the exact q-th power (or the
/// exact value for q = inf) when a closed form stays rational.
struct NormValue {
  bool diverges = false;
  Real value = 0;
  std::optional<Rational> exact_power;
  Real tolerance = 0;
};

LevelProfile make_profile(std::vector<std::pair<Rational, ExtRational>> levels);

/// mu_h(s) = mu({|h| > s}).
ExtRational distribution(const LevelProfile& h, const Rational& s);
StepFunction rearrangement(const LevelProfile& h);
/// h**(t) = (1/t) int_0^t h*(s) ds.
Real average_function(const StepFunction& hstar, const Rational& t);
std::optional<Rational> average_exact(const StepFunction& hstar, const Rational& t);
NormValue quasi_norm(const StepFunction& hstar, const LorentzIndex& idx);
NormValue norm(const StepFunction& hstar, const LorentzIndex& idx, Real tolerance = 1e-12L);
/// (p')^{1/q} m^{1/p} for q < inf, m^{1/p} for q = inf.
Real char_norm_closed_form(const ExtRational& measure, const LorentzIndex& idx);
bool is_zero_ae(const LevelProfile& h);

template <class S>
LevelProfile profile_of(const S& X, const SimpleFunction<S>& h) {
  std::vector<std::pair<Rational, ExtRational>> levels;
  for (const auto& [c, a] : h.pieces) levels.emplace_back(c.norm_sq(), measure_of(X, a));
  return make_profile(std::move(levels));
}

/// Characteristic norm of a set via the general norm routine.
template <class S>
NormValue char_norm(const S& X, const SetOf<S>& a, const LorentzIndex& idx) {
  return norm(rearrangement(profile_of(X, indicator<S>(a))), idx);
}

}  // namespace lorentz_ops
