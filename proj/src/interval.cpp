#include "lorentz_ops/interval.hpp"

#include <algorithm>

namespace lorentz_ops {

Interval parse_interval(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s += c;
  }
  if (s.size() < 5) throw ParseError("malformed interval '" + std::string(text) + "'");
  char open = s.front();
  char close = s.back();
  if ((open != '[' && open != '(') || (close != ']' && close != ')')) {
    throw ParseError("interval must be bracketed: '" + std::string(text) + "'");
  }
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("interval needs a comma: '" + std::string(text) + "'");
  ExtRational lo = parse_ext_rational(s.substr(1, comma - 1));
  ExtRational hi = parse_ext_rational(s.substr(comma + 1, s.size() - comma - 2));
  if (!(lo < hi)) throw ParseError("interval endpoints out of order: '" + std::string(text) + "'");
  return {lo, hi};
}

std::string to_string(const Interval& i) {
  std::string l = i.lo.is_finite() ? "[" : "(";
  std::string r = i.hi.is_finite() ? "]" : ")";
  return l + to_string(i.lo) + "," + to_string(i.hi) + r;
}

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& i) { return !(i.lo < i.hi); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (Interval& p : parts) {
    if (!parts_.empty() && p.lo <= parts_.back().hi) {
      if (parts_.back().hi < p.hi) parts_.back().hi = p.hi;
    } else {
      parts_.push_back(std::move(p));
    }
  }
}

IntervalUnion IntervalUnion::whole_line() {
  return single(ExtRational::neg_inf(), ExtRational::pos_inf());
}

IntervalUnion IntervalUnion::single(ExtRational lo, ExtRational hi) {
  return IntervalUnion(std::vector<Interval>{{std::move(lo), std::move(hi)}});
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& o) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    ExtRational lo = std::max(parts_[i].lo, o.parts_[j].lo);
    ExtRational hi = std::min(parts_[i].hi, o.parts_[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (parts_[i].hi < o.parts_[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::complement() const {
  std::vector<Interval> out;
  ExtRational cursor = ExtRational::neg_inf();
  for (const Interval& p : parts_) {
    if (cursor < p.lo) out.push_back({cursor, p.lo});
    cursor = p.hi;
  }
  if (cursor < ExtRational::pos_inf()) out.push_back({cursor, ExtRational::pos_inf()});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::minus(const IntervalUnion& o) const { return intersect(o.complement()); }

IntervalUnion IntervalUnion::affine_image(const Rational& a, const Rational& b) const {
  if (sgn(a) == 0) throw std::invalid_argument("affine_image: zero slope");
  std::vector<Interval> out;
  for (const Interval& p : parts_) {
    ExtRational x = p.lo * a + ExtRational(b);
    ExtRational y = p.hi * a + ExtRational(b);
    if (sgn(a) < 0) std::swap(x, y);
    out.push_back({x, y});
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::affine_preimage(const Rational& a, const Rational& b) const {
  if (sgn(a) == 0) throw std::invalid_argument("affine_preimage: zero slope");
  Rational inv = 1 / a;
  return affine_image(inv, Rational(-b * inv));
}

bool IntervalUnion::contains_point(const Rational& x) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& p) { return p.contains(x); });
}

ExtRational IntervalUnion::length() const {
  ExtRational total = 0;
  for (const Interval& p : parts_) total += p.length();
  return total;
}

std::string to_string(const IntervalUnion& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const Interval& p : s.parts()) {
    if (!out.empty()) out += " u ";
    out += to_string(p);
  }
  return out;
}

}  // namespace lorentz_ops
