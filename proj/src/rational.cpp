#include "lorentz_ops/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lorentz_ops {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

Rational parse_decimal(std::string_view s) {
  // [sign] digits [. digits] [e[sign]digits]
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  std::string mantissa;
  long scale = 0;
  bool seen_digit = false;
  for (; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos) {
    mantissa += s[pos];
    seen_digit = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    for (; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos) {
      mantissa += s[pos];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + std::string(s) + "'");
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::string_view exp = s.substr(pos);
    if (!is_integer_literal(exp)) throw ParseError("malformed exponent in '" + std::string(s) + "'");
    scale += std::stol(std::string(exp));
    pos = s.size();
  }
  if (pos != s.size()) throw ParseError("malformed number '" + std::string(s) + "'");
  mpz_class m(mantissa.empty() ? std::string("0") : mantissa, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale < 0 ? Rational(m, p) : Rational(m * p, 1);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = trim(s.substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den)) {
      throw ParseError("malformed rational '" + std::string(s) + "'");
    }
    mpz_class d = parse_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    Rational q(parse_integer(num), d);
    q.canonicalize();
    return q;
  }
  if (is_integer_literal(s)) return Rational(parse_integer(s), 1);
  return parse_decimal(s);
}

std::string to_string(const Rational& q) { return q.get_str(); }

Real to_real(const Rational& q) {
  // mpq -> double loses range for huge values; split numerator and denominator.
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) < 60 && mpz_sizeinbase(d.get_mpz_t(), 2) < 60) {
    return static_cast<Real>(n.get_si()) / static_cast<Real>(d.get_si());
  }
  long en = 0;
  long ed = 0;
  Real mn = mpz_get_d_2exp(&en, n.get_mpz_t());
  Real md = mpz_get_d_2exp(&ed, d.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

Rational pow_int(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

// --- ExtRational ------------------------------------------------------------

const Rational& ExtRational::value() const {
  if (!is_finite()) throw std::logic_error("ExtRational::value() on an infinite value");
  return value_;
}

Real ExtRational::to_real() const {
  switch (kind_) {
    case Kind::PosInf:
      return std::numeric_limits<Real>::infinity();
    case Kind::NegInf:
      return -std::numeric_limits<Real>::infinity();
    case Kind::Finite:
      break;
  }
  return lorentz_ops::to_real(value_);
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.kind_ != b.kind_) return false;
  return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  auto rank = [](const ExtRational& x) {
    return x.is_neg_inf() ? 0 : (x.is_finite() ? 1 : 2);
  };
  if (rank(a) != rank(b)) return rank(a) <=> rank(b);
  if (!a.is_finite()) return std::strong_ordering::equal;
  int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.is_finite() && b.is_finite()) return ExtRational(Rational(a.value_ + b.value_));
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw std::domain_error("inf - inf is undefined");
  }
  return a.is_finite() ? b : a;
}

ExtRational operator-(const ExtRational& a) {
  if (a.is_pos_inf()) return ExtRational::neg_inf();
  if (a.is_neg_inf()) return ExtRational::pos_inf();
  return ExtRational(Rational(-a.value_));
}

ExtRational operator*(const ExtRational& a, const Rational& s) {
  if (a.is_finite()) return ExtRational(Rational(a.value_ * s));
  int sign = sgn(s);
  if (sign == 0) return ExtRational(0);
  return sign > 0 ? a : -a;
}

ExtRational parse_ext_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "+inf" || s == "oo" || s == "infinity") return ExtRational::pos_inf();
  if (s == "-inf" || s == "-oo" || s == "-infinity") return ExtRational::neg_inf();
  return ExtRational(parse_rational(s));
}

std::string to_string(const ExtRational& q) {
  if (q.is_pos_inf()) return "inf";
  if (q.is_neg_inf()) return "-inf";
  return to_string(q.value());
}

std::ostream& operator<<(std::ostream& os, const ExtRational& q) { return os << to_string(q); }

// --- ComplexRational ----------------------------------------------------------

ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
  Rational d = b.norm_sq();
  if (sgn(d) == 0) throw std::domain_error("complex division by zero");
  ComplexRational n = a * b.conj();
  return {n.re / d, n.im / d};
}

ComplexRational parse_complex(std::string_view text) {
  std::string s;
  for (char c : trim(text)) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty complex literal");
  if (s.back() != 'i') return ComplexRational(parse_rational(s));
  std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the leading one and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  Rational im;
  if (im_part.empty() || im_part == "+") {
    im = 1;
  } else if (im_part == "-") {
    im = -1;
  } else {
    im = parse_rational(im_part);
  }
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
  return {re, im};
}

std::string to_string(const ComplexRational& z) {
  if (sgn(z.im) == 0) return to_string(z.re);
  std::string im;
  if (z.im == 1) {
    im = "i";
  } else if (z.im == -1) {
    im = "-i";
  } else {
    im = to_string(z.im) + "i";
  }
  if (sgn(z.re) == 0) return im;
  if (im[0] != '-') im = "+" + im;
  return to_string(z.re) + im;
}

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) { return os << to_string(z); }

}  // namespace lorentz_ops
