#include "lorentz_ops/lorentz.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lorentz_ops/errors.hpp"

namespace lorentz_ops {

namespace {

Real rpow(Real base, Real e) {
  if (base == 0) return e > 0 ? 0 : (e == 0 ? 1 : INFINITY);
  return std::pow(base, e);
}

std::optional<Rational> exact_value(const Magnitude& m) { return m.exact(); }

// q-th power of a magnitude when rational.
std::optional<Rational> exact_pow(const Magnitude& m, unsigned q) {
  if (q % 2 == 0) return pow_int(m.sq, q / 2);
  auto v = m.exact();
  if (!v) return std::nullopt;
  return pow_int(*v, q);
}

std::optional<unsigned> as_natural(const ExtRational& x) {
  if (!x.is_finite()) return std::nullopt;
  const Rational& v = x.value();
  if (v.get_den() != 1 || sgn(v) <= 0 || !v.get_num().fits_uint_p()) return std::nullopt;
  return static_cast<unsigned>(v.get_num().get_ui());
}

// Cumulative integrals C_i = int_0^{t_i} h*.
std::vector<Real> cumulative(const StepFunction& h) {
  std::vector<Real> out;
  Real acc = 0;
  Real prev = 0;
  for (std::size_t i = 0; i < h.breaks.size(); ++i) {
    Real t = h.breaks[i].to_real();
    acc += h.values[i].value() * (t - prev);
    out.push_back(acc);
    prev = t;
  }
  return out;
}

bool infinite_top(const StepFunction& h) {
  return !h.breaks.empty() && h.breaks.back().is_pos_inf() && sgn(h.values.back().sq) > 0;
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

}  // namespace

LorentzIndex::LorentzIndex(ExtRational p, ExtRational q) : p_(std::move(p)), q_(std::move(q)) {
  if (!(p_ > ExtRational(1))) throw ValidationError("p must exceed 1, got p = " + to_string(p_));
  if (q_ < ExtRational(1)) throw ValidationError("q must be at least 1, got q = " + to_string(q_));
  if (p_.is_pos_inf() && !q_.is_pos_inf()) throw ValidationError("Lorentz index with p = inf requires q = inf");
}

ExtRational LorentzIndex::p_conjugate() const {
  if (p_.is_pos_inf()) return ExtRational(1);
  return ExtRational(Rational(p_.value() / (p_.value() - 1)));
}

std::optional<unsigned> LorentzIndex::q_integer() const { return as_natural(q_); }

std::string to_string(const LorentzIndex& idx) { return "(" + to_string(idx.p()) + "," + to_string(idx.q()) + ")"; }

Real Magnitude::value() const { return std::sqrt(to_real(sq)); }

Magnitude StepFunction::at(const Rational& t) const {
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (ExtRational(t) < breaks[i]) return values[i];
  }
  return Magnitude{0};
}

LevelProfile make_profile(std::vector<std::pair<Rational, ExtRational>> levels) {
  LevelProfile out;
  for (auto& [sq, m] : levels) {
    if (sgn(sq) == 0 || m.is_zero()) continue;
    auto it = std::find_if(out.levels.begin(), out.levels.end(), [&](const auto& l) { return l.first == sq; });
    if (it == out.levels.end()) {
      out.levels.emplace_back(sq, m);
    } else {
      it->second += m;
    }
  }
  std::sort(out.levels.begin(), out.levels.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

ExtRational distribution(const LevelProfile& h, const Rational& s) {
  Rational s2 = s * s;
  ExtRational out = 0;
  for (const auto& [sq, m] : h.levels) {
    if (sq > s2) out += m;
  }
  return out;
}

StepFunction rearrangement(const LevelProfile& h) {
  StepFunction out;
  ExtRational t = 0;
  for (const auto& [sq, m] : h.levels) {
    t += m;
    out.breaks.push_back(t);
    out.values.push_back(Magnitude{sq});
    if (t.is_pos_inf()) break;
  }
  return out;
}

Real average_function(const StepFunction& hstar, const Rational& t) {
  if (sgn(t) <= 0) throw ValidationError("average function needs t > 0");
  ExtRational et(t);
  Real acc = 0;
  ExtRational prev = 0;
  for (std::size_t i = 0; i < hstar.breaks.size() && prev < et; ++i) {
    ExtRational hi = std::min(hstar.breaks[i], et);
    acc += hstar.values[i].value() * (hi - prev).to_real();
    prev = hi;
  }
  return acc / to_real(t);
}

std::optional<Rational> average_exact(const StepFunction& hstar, const Rational& t) {
  if (sgn(t) <= 0) throw ValidationError("average function needs t > 0");
  ExtRational et(t);
  Rational acc = 0;
  ExtRational prev = 0;
  for (std::size_t i = 0; i < hstar.breaks.size() && prev < et; ++i) {
    auto v = exact_value(hstar.values[i]);
    if (!v) return std::nullopt;
    ExtRational hi = std::min(hstar.breaks[i], et);
    acc += *v * (hi - prev).value();
    prev = hi;
  }
  return Rational(acc / t);
}

NormValue quasi_norm(const StepFunction& h, const LorentzIndex& idx) {
  NormValue out;
  if (h.breaks.empty()) {
    out.exact_power = Rational(0);
    return out;
  }
  if (infinite_top(h) && !idx.p_infinite()) {
    out.diverges = true;
    out.value = INFINITY;
    return out;
  }
  if (idx.q_infinite()) {
    if (idx.p_infinite()) {
      out.value = h.values.front().value();
      out.exact_power = exact_value(h.values.front());
      return out;
    }
    Real inv_p = 1 / idx.p_real();
    for (std::size_t i = 0; i < h.breaks.size(); ++i) {
      out.value = std::max(out.value, h.values[i].value() * rpow(h.breaks[i].to_real(), inv_p));
    }
    return out;
  }
  Real q = idx.q_real();
  Real r = q / idx.p_real();
  Real acc = 0;
  Real prev = 0;
  for (std::size_t i = 0; i < h.breaks.size(); ++i) {
    Real t = rpow(h.breaks[i].to_real(), r);
    acc += rpow(h.values[i].value(), q) * (t - prev);
    prev = t;
  }
  out.value = rpow(acc, 1 / q);
  // Exact when q and q/p are natural numbers and every |c|^q is rational.
  auto qn = idx.q_integer();
  auto rn = as_natural(ExtRational(Rational(idx.q().value() / idx.p().value())));
  if (qn && rn) {
    Rational sum = 0;
    Rational tprev = 0;
    for (std::size_t i = 0; i < h.breaks.size(); ++i) {
      auto vq = exact_pow(h.values[i], *qn);
      if (!vq) return out;
      Rational tr = pow_int(h.breaks[i].value(), *rn);
      sum += *vq * (tr - tprev);
      tprev = tr;
    }
    out.exact_power = sum;
  }
  return out;
}

NormValue norm(const StepFunction& h, const LorentzIndex& idx, Real tolerance) {
  NormValue out;
  out.tolerance = tolerance;
  if (h.breaks.empty()) {
    out.exact_power = Rational(0);
    return out;
  }
  if (idx.p_infinite()) {
    // sup_t h**(t) = h*(0+).
    out.value = h.values.front().value();
    out.exact_power = exact_value(h.values.front());
    return out;
  }
  if (infinite_top(h)) {
    out.diverges = true;
    out.value = INFINITY;
    return out;
  }
  std::vector<Real> C = cumulative(h);
  std::size_t n = h.breaks.size();
  Real inv_p = 1 / idx.p_real();
  if (idx.q_infinite()) {
    // t^{1/p}(a + b/t) has no interior maximum, and the tail t^{1/p-1} C_n decreases.
    for (std::size_t i = 0; i < n; ++i) {
      out.value = std::max(out.value, C[i] * rpow(h.breaks[i].to_real(), inv_p - 1));
    }
    return out;
  }
  Real q = idx.q_real();
  Real r = q * inv_p;
  auto qn = idx.q_integer();

  // Exact bookkeeping: only rational terms, no logarithms.
  auto rn_opt = as_natural(ExtRational(Rational(idx.q().value() / idx.p().value())));
  bool exact = qn.has_value() && rn_opt.has_value();
  Rational exact_sum = 0;
  std::vector<std::optional<Rational>> values_exact;
  std::vector<Rational> C_exact;
  if (exact) {
    Rational acc = 0;
    Rational prev = 0;
    for (std::size_t i = 0; i < n && exact; ++i) {
      auto v = exact_value(h.values[i]);
      if (!v) {
        exact = false;
        break;
      }
      values_exact.push_back(v);
      acc += *v * (h.breaks[i].value() - prev);
      C_exact.push_back(acc);
      prev = h.breaks[i].value();
    }
  }
  auto pow_signed = [](const Rational& t, long e) {
    return e >= 0 ? pow_int(t, static_cast<unsigned>(e)) : Rational(1 / pow_int(t, static_cast<unsigned>(-e)));
  };

  Real total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real a = h.values[i].value();
    Real t0 = i == 0 ? 0 : h.breaks[i - 1].to_real();
    Real t1 = h.breaks[i].to_real();
    Real b = i == 0 ? 0 : C[i - 1] - a * t0;
    if (b < 0) b = 0;
    bool b_zero = i == 0;
    if (b_zero) {
      total += rpow(a, q) * (rpow(t1, r) - rpow(t0, r)) / r;
    } else if (qn) {
      for (unsigned j = 0; j <= *qn; ++j) {
        Real coef = to_real(binomial(*qn, j)) * rpow(a, q - j) * rpow(b, j);
        Real e = r - j;
        if (rn_opt && j == *rn_opt) {
          total += coef * std::log(t1 / t0);
        } else {
          total += coef * (rpow(t1, e) - rpow(t0, e)) / e;
        }
      }
    } else {
      auto f = [&](Real t) { return rpow(a + b / t, q) * rpow(t, r - 1); };
      Real err = 0;
      total += boost::math::quadrature::gauss_kronrod<Real, 61>::integrate(f, t0, t1, 15, tolerance, &err);
    }
    if (exact) {
      unsigned qi = *qn;
      long ri = static_cast<long>(*rn_opt);
      const Rational& av = *values_exact[i];
      Rational tb0 = i == 0 ? Rational(0) : h.breaks[i - 1].value();
      Rational tb1 = h.breaks[i].value();
      Rational bv = i == 0 ? Rational(0) : Rational(C_exact[i - 1] - av * tb0);
      for (unsigned j = 0; j <= qi && exact; ++j) {
        if (j > 0 && sgn(bv) == 0) break;
        long e = ri - static_cast<long>(j);
        if (e == 0) {
          exact = false;
          break;
        }
        Rational coef = binomial(qi, j) * pow_int(av, qi - j) * pow_int(bv, j);
        Rational lower = (i == 0) ? Rational(0) : pow_signed(tb0, e);
        exact_sum += coef * (pow_signed(tb1, e) - lower) / Rational(e);
      }
    }
  }
  // Tail: h** = C_n / t beyond the last breakpoint.
  Real tn = h.breaks.back().to_real();
  total += rpow(C.back(), q) * rpow(tn, r - q) / (q - r);
  if (exact) {
    unsigned qi = *qn;
    long ri = static_cast<long>(*rn_opt);
    long e = ri - static_cast<long>(qi);
    exact_sum += pow_int(C_exact.back(), qi) * pow_signed(h.breaks.back().value(), e) / Rational(-e);
    out.exact_power = Rational(exact_sum * ri);
  }
  total *= r;
  out.value = rpow(total, 1 / q);
  return out;
}

Real char_norm_closed_form(const ExtRational& measure, const LorentzIndex& idx) {
  if (!measure.is_finite()) throw ValidationError("characteristic norm of a set of infinite measure");
  Real m = measure.to_real();
  if (m == 0) return 0;
  Real mp = idx.p_infinite() ? 1 : rpow(m, 1 / idx.p_real());
  if (idx.q_infinite()) return mp;
  return rpow(idx.p_conjugate().to_real(), 1 / idx.q_real()) * mp;
}

bool is_zero_ae(const LevelProfile& h) { return distribution(h, 0).is_zero(); }

}  // namespace lorentz_ops
