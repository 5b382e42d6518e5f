#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lorentz_ops/rational.hpp"

namespace lorentz_ops {

/// Open interval (lo, hi) with lo < hi. Endpoints are irrelevant mod null sets.
struct Interval {
  ExtRational lo;
  ExtRational hi;

  bool operator==(const Interval&) const = default;
  ExtRational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo < ExtRational(x) && ExtRational(x) < hi; }
};

/// Parses "[a,b]", "(a,b)", "[a,b)" or "(a,b]"; endpoints may be inf.
Interval parse_interval(std::string_view text);
std::string to_string(const Interval& i);

/// Finite union of open intervals, kept sorted, disjoint and merged, so two
/// sets equal mod null compare equal structurally.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);
  static IntervalUnion whole_line();
  static IntervalUnion single(ExtRational lo, ExtRational hi);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  IntervalUnion unite(const IntervalUnion& o) const;
  IntervalUnion intersect(const IntervalUnion& o) const;
  IntervalUnion minus(const IntervalUnion& o) const;
  IntervalUnion complement() const;
  /// Image under x -> a x + b, a != 0.
  IntervalUnion affine_image(const Rational& a, const Rational& b) const;
  /// Preimage under x -> a x + b, a != 0.
  IntervalUnion affine_preimage(const Rational& a, const Rational& b) const;
  bool contains_point(const Rational& x) const;
  /// Lebesgue length.
  ExtRational length() const;

  bool operator==(const IntervalUnion&) const = default;

 private:
  std::vector<Interval> parts_;
};

std::string to_string(const IntervalUnion& s);

/// Function on the real line, constant (or of type V) on finitely many open
/// pieces covering it; values at cut points are ignored.
template <class V>
class PiecewiseFn {
 public:
  struct Piece {
    Interval span;
    V value;
    bool operator==(const Piece&) const = default;
  };

  PiecewiseFn() : pieces_{{{ExtRational::neg_inf(), ExtRational::pos_inf()}, V{}}} {}
  explicit PiecewiseFn(V everywhere) : pieces_{{{ExtRational::neg_inf(), ExtRational::pos_inf()}, std::move(everywhere)}} {}

  /// Builds from disjoint (interval, value) assignments; `fill` elsewhere.
  static PiecewiseFn from_assignments(const std::vector<std::pair<Interval, V>>& items, const V& fill) {
    PiecewiseFn out(fill);
    for (const auto& [span, value] : items) out = out.assign(span, value);
    return out;
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Overwrites the value on `span`.
  PiecewiseFn assign(const Interval& span, const V& value) const {
    std::vector<Piece> out;
    for (const Piece& p : pieces_) {
      if (p.span.hi <= span.lo || span.hi <= p.span.lo) {
        out.push_back(p);
        continue;
      }
      if (p.span.lo < span.lo) out.push_back({{p.span.lo, span.lo}, p.value});
      ExtRational lo = std::max(p.span.lo, span.lo);
      ExtRational hi = std::min(p.span.hi, span.hi);
      out.push_back({{lo, hi}, value});
      if (span.hi < p.span.hi) out.push_back({{span.hi, p.span.hi}, p.value});
    }
    return PiecewiseFn(std::move(out));
  }

  /// Common refinement, then pointwise fn.
  template <class W, class Fn>
  static PiecewiseFn combine(const PiecewiseFn<W>& a, const PiecewiseFn<W>& b, Fn&& fn) {
    std::vector<Piece> out;
    std::size_t i = 0;
    std::size_t j = 0;
    ExtRational lo = ExtRational::neg_inf();
    const auto& pa = a.pieces();
    const auto& pb = b.pieces();
    while (i < pa.size() && j < pb.size()) {
      ExtRational hi = std::min(pa[i].span.hi, pb[j].span.hi);
      out.push_back({{lo, hi}, fn(pa[i].value, pb[j].value)});
      lo = hi;
      if (pa[i].span.hi == hi) ++i;
      if (pb[j].span.hi == hi) ++j;
    }
    return PiecewiseFn(std::move(out));
  }

  template <class Fn>
  auto map(Fn&& fn) const -> PiecewiseFn<decltype(fn(std::declval<const V&>()))> {
    using W = decltype(fn(std::declval<const V&>()));
    std::vector<typename PiecewiseFn<W>::Piece> out;
    for (const Piece& p : pieces_) out.push_back({p.span, fn(p.value)});
    return PiecewiseFn<W>(std::move(out));
  }

  /// Pieces of the support of pred, as a set mod null.
  template <class Pred>
  IntervalUnion where(Pred&& pred) const {
    std::vector<Interval> parts;
    for (const Piece& p : pieces_) {
      if (pred(p.value)) parts.push_back(p.span);
    }
    return IntervalUnion(std::move(parts));
  }

  /// Pieces restricted to a set: (sub-interval, value) for each overlap.
  std::vector<std::pair<Interval, V>> restricted(const IntervalUnion& set) const {
    std::vector<std::pair<Interval, V>> out;
    for (const Piece& p : pieces_) {
      IntervalUnion overlap = set.intersect(IntervalUnion({p.span}));
      for (const Interval& i : overlap.parts()) out.emplace_back(i, p.value);
    }
    return out;
  }

  /// Value on the piece containing x; x must not be a cut point.
  const V& at(const Rational& x) const {
    for (const Piece& p : pieces_) {
      if (p.span.contains(x)) return p.value;
    }
    throw std::out_of_range("PiecewiseFn::at: point is a cut");
  }

  bool operator==(const PiecewiseFn&) const = default;

  explicit PiecewiseFn(std::vector<Piece> pieces) : pieces_(std::move(pieces)) { merge(); }

 private:
  void merge() {
    std::vector<Piece> out;
    for (Piece& p : pieces_) {
      if (!(p.span.lo < p.span.hi)) continue;
      if (!out.empty() && out.back().value == p.value && out.back().span.hi == p.span.lo) {
        out.back().span.hi = p.span.hi;
      } else {
        out.push_back(std::move(p));
      }
    }
    pieces_ = std::move(out);
  }

  std::vector<Piece> pieces_;
};

}  // namespace lorentz_ops
