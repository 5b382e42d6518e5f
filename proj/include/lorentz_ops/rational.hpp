#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz_ops {

using Rational = mpq_class;
using Real = long double;

/// Thrown for malformed numeric literals.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "a", "a/b", "-a/b" or a plain decimal such as "0.25" or "1e-3".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Real to_real(const Rational& q);

Rational abs(const Rational& q);
/// Exact square root when q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);
Rational pow_int(const Rational& base, unsigned exponent);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

/// Rational extended by +inf and -inf. Used for measures, endpoints and
/// distribution values.
class ExtRational {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  ExtRational() = default;
  ExtRational(Rational v) : value_(std::move(v)) {}
  ExtRational(long v) : value_(v) {}
  ExtRational(int v) : value_(v) {}

  static ExtRational pos_inf() { return ExtRational(Kind::PosInf); }
  static ExtRational neg_inf() { return ExtRational(Kind::NegInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  Kind kind() const { return kind_; }
  /// Precondition: is_finite().
  const Rational& value() const;
  bool is_zero() const { return is_finite() && sgn(value_) == 0; }
  Real to_real() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator-(const ExtRational& a);
  friend ExtRational operator-(const ExtRational& a, const ExtRational& b) { return a + (-b); }
  /// Scales by a finite rational; 0 * inf is 0 (measure-theoretic convention).
  friend ExtRational operator*(const ExtRational& a, const Rational& s);
  ExtRational& operator+=(const ExtRational& other) { return *this = *this + other; }

 private:
  explicit ExtRational(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Rational value_ = 0;
};

/// "inf", "+inf", "-inf" or any rational literal.
ExtRational parse_ext_rational(std::string_view text);
std::string to_string(const ExtRational& q);
std::ostream& operator<<(std::ostream& os, const ExtRational& q);

/// Complex number with exact rational parts.
struct ComplexRational {
  Rational re = 0;
  Rational im = 0;

  ComplexRational() = default;
  ComplexRational(Rational r) : re(std::move(r)) {}
  ComplexRational(long r) : re(r) {}
  ComplexRational(int r) : re(r) {}
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  /// |z|^2, always rational.
  Rational norm_sq() const { return re * re + im * im; }
  ComplexRational conj() const { return {re, -im}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  /// Lexicographic order, used only for canonical sorting.
  friend bool operator<(const ComplexRational& a, const ComplexRational& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b);
  ComplexRational& operator+=(const ComplexRational& o) { return *this = *this + o; }
  ComplexRational& operator*=(const ComplexRational& o) { return *this = *this * o; }
};

/// Accepts "3", "-1/2", "2i", "1/2-3/4i", "i", "-i".
ComplexRational parse_complex(std::string_view text);
std::string to_string(const ComplexRational& z);
std::ostream& operator<<(std::ostream& os, const ComplexRational& z);

}  // namespace lorentz_ops
