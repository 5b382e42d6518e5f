#include "lorentz_ops/continuum.hpp"

#include <algorithm>

namespace lorentz_ops {

namespace {

IntervalUnion one(const Interval& i) { return IntervalUnion(std::vector<Interval>{i}); }

/// Where the base measure lives: carrier minus zero-density pieces.
IntervalUnion measure_support(const IntervalSpace& X) {
  return X.carrier.intersect(X.density.where([](const Rational& v) { return sgn(v) > 0; }));
}

Rational re_dot(const ComplexRational& a, const ComplexRational& b) { return a.re * b.re + a.im * b.im; }

/// |alpha + beta x|^2 = c2 x^2 + c1 x + c0.
struct Quadratic {
  Rational c2, c1, c0;
  Rational at(const Rational& x) const { return (c2 * x + c1) * x + c0; }
};

Quadratic sq_of(const AffinePiece& p) {
  return {p.beta.norm_sq(), 2 * re_dot(p.alpha, p.beta), p.alpha.norm_sq()};
}

/// Infimum of q on the open interval (lo, hi); nullopt when -inf.
std::optional<Rational> inf_on(const Quadratic& q, const Interval& span) {
  std::optional<Rational> best;
  auto take = [&](const Rational& v) { best = best ? std::min(*best, v) : v; };
  const bool lo_inf = !span.lo.is_finite();
  const bool hi_inf = !span.hi.is_finite();
  if (lo_inf || hi_inf) {
    if (sgn(q.c2) < 0) return std::nullopt;
    if (sgn(q.c2) == 0) {
      if (lo_inf && sgn(q.c1) > 0) return std::nullopt;
      if (hi_inf && sgn(q.c1) < 0) return std::nullopt;
      if (sgn(q.c1) == 0) take(q.c0);
    }
  }
  if (!lo_inf) take(q.at(span.lo.value()));
  if (!hi_inf) take(q.at(span.hi.value()));
  if (sgn(q.c2) > 0) {
    Rational v = -q.c1 / (2 * q.c2);
    if (span.lo <= ExtRational(v) && ExtRational(v) <= span.hi) take(q.at(v));
  }
  return best;
}

/// Supremum of q on (lo, hi); nullopt when +inf.
std::optional<Rational> sup_on(const Quadratic& q, const Interval& span) {
  Quadratic neg{-q.c2, -q.c1, -q.c0};
  auto m = inf_on(neg, span);
  if (!m) return std::nullopt;
  return Rational(-*m);
}

AffinePiece substitute(const AffinePiece& p, const Rational& a, const Rational& b) {
  // p(a x + b) = (alpha + beta b) + (beta a) x
  return {p.alpha + p.beta * ComplexRational(b), p.beta * ComplexRational(a)};
}

}  // namespace

IntervalSpace::IntervalSpace(IntervalUnion c) : carrier(std::move(c)) {
  std::vector<std::pair<Interval, Rational>> items;
  for (const Interval& i : carrier.parts()) items.emplace_back(i, Rational(1));
  density = PiecewiseFn<Rational>::from_assignments(items, Rational(0));
}

IntervalSpace::IntervalSpace(IntervalUnion c, const std::vector<std::pair<Interval, Rational>>& pieces)
    : IntervalSpace(std::move(c)) {
  for (const auto& [span, v] : pieces) {
    if (sgn(v) < 0) throw ValidationError("density must be nonnegative");
    if (!one(span).minus(carrier).empty()) {
      throw ValidationError("density piece " + to_string(span) + " lies outside the carrier");
    }
  }
  std::vector<std::pair<Interval, Rational>> items;
  for (const auto& [span, v] : pieces) {
    IntervalUnion inside = carrier.intersect(one(span));
    for (const Interval& i : inside.parts()) items.emplace_back(i, v);
  }
  for (const auto& [span, v] : items) density = density.assign(span, v);
}

void validate(const IntervalSpace& X, const PiecewiseAffineMap& T) {
  if (T.branches.empty()) throw ValidationError("map needs at least one branch");
  IntervalUnion covered;
  ExtRational overlap = 0;
  for (const AffineBranch& br : T.branches) {
    IntervalUnion d = one(br.domain);
    overlap += covered.intersect(d).length();
    covered = covered.unite(d);
    if (sgn(br.slope) != 0) {
      IntervalUnion img = d.affine_image(br.slope, br.intercept);
      if (!img.minus(X.carrier).empty()) {
        throw ValidationError("branch on " + to_string(br.domain) + " maps outside the carrier");
      }
    } else {
      bool inside = X.carrier.contains_point(br.intercept);
      for (const Interval& p : X.carrier.parts()) {
        if (p.lo == ExtRational(br.intercept) || p.hi == ExtRational(br.intercept)) inside = true;
      }
      if (!inside) throw ValidationError("constant branch value lies outside the carrier");
    }
  }
  if (!overlap.is_zero()) throw ValidationError("branch domains overlap");
  if (!(covered == X.carrier)) throw ValidationError("branch domains must tile the carrier");
}

IntervalUnion empty_set(const IntervalSpace&) { return {}; }
IntervalUnion full_set(const IntervalSpace& X) { return X.carrier; }
IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) { return a.unite(b); }
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) { return a.intersect(b); }
IntervalUnion minus(const IntervalUnion& a, const IntervalUnion& b) { return a.minus(b); }

ExtRational measure_of(const IntervalSpace& X, const IntervalUnion& a) {
  return measure_of(X, base_measure(X), a);
}

PiecewiseAffineMap identity_map(const IntervalSpace& X) {
  PiecewiseAffineMap T;
  for (const Interval& p : X.carrier.parts()) T.branches.push_back({p, 1, 0});
  return T;
}

IntervalUnion preimage1(const IntervalSpace&, const PiecewiseAffineMap& T, const IntervalUnion& a) {
  IntervalUnion out;
  for (const AffineBranch& br : T.branches) {
    IntervalUnion d = one(br.domain);
    if (sgn(br.slope) == 0) {
      if (a.contains_point(br.intercept)) out = out.unite(d);
    } else {
      out = out.unite(d.intersect(a.affine_preimage(br.slope, br.intercept)));
    }
  }
  return out;
}

IntervalUnion image1(const IntervalSpace&, const PiecewiseAffineMap& T, const IntervalUnion& a) {
  IntervalUnion out;
  for (const AffineBranch& br : T.branches) {
    if (sgn(br.slope) == 0) continue;
    out = out.unite(a.intersect(one(br.domain)).affine_image(br.slope, br.intercept));
  }
  return out;
}

PiecewiseAffineMap compose(const PiecewiseAffineMap& outer, const PiecewiseAffineMap& inner) {
  PiecewiseAffineMap out;
  for (const AffineBranch& in : inner.branches) {
    IntervalUnion d = one(in.domain);
    if (sgn(in.slope) == 0) {
      for (const AffineBranch& o : outer.branches) {
        if (o.domain.contains(in.intercept)) {
          out.branches.push_back({in.domain, 0, o.slope * in.intercept + o.intercept});
        }
      }
      continue;
    }
    for (const AffineBranch& o : outer.branches) {
      IntervalUnion part = d.intersect(one(o.domain).affine_preimage(in.slope, in.intercept));
      for (const Interval& p : part.parts()) {
        out.branches.push_back({p, o.slope * in.slope, o.slope * in.intercept + o.intercept});
      }
    }
  }
  std::sort(out.branches.begin(), out.branches.end(),
            [](const AffineBranch& x, const AffineBranch& y) { return x.domain.lo < y.domain.lo; });
  return out;
}

IntervalMeasure base_measure(const IntervalSpace& X) { return {X.density}; }

IntervalMeasure push_measure(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalMeasure& m) {
  PiecewiseFn<Rational> acc(Rational(0));
  for (const AffineBranch& br : T.branches) {
    auto pieces = m.density.restricted(one(br.domain));
    if (sgn(br.slope) == 0) {
      for (const auto& [span, v] : pieces) {
        if (sgn(v) > 0) {
          throw NotAbsolutelyContinuous("constant branch on " + to_string(br.domain) +
                                        " sends positive mass to the point " + to_string(br.intercept));
        }
      }
      continue;
    }
    Rational scale = 1 / abs(br.slope);
    for (const auto& [span, v] : pieces) {
      if (sgn(v) == 0) continue;
      IntervalUnion moved = one(span).affine_image(br.slope, br.intercept);
      for (const Interval& img : moved.parts()) {
        PiecewiseFn<Rational> bump = PiecewiseFn<Rational>(Rational(0)).assign(img, Rational(v * scale));
        acc = PiecewiseFn<Rational>::combine(acc, bump, [](const Rational& x, const Rational& y) {
          return Rational(x + y);
        });
      }
    }
  }
  (void)X;
  return {acc};
}

ExtRational measure_of(const IntervalSpace&, const IntervalMeasure& m, const IntervalUnion& a) {
  ExtRational total = 0;
  for (const auto& [span, v] : m.density.restricted(a)) total += span.length() * v;
  return total;
}

IntervalDensity density_of(const IntervalSpace& X, const IntervalMeasure& m) {
  auto ratio = PiecewiseFn<Rational>::combine(m.density, X.density, [](const Rational& nu, const Rational& rho) {
    if (sgn(rho) == 0) {
      if (sgn(nu) != 0) throw NotAbsolutelyContinuous("mass on a region of zero base density");
      return Rational(0);
    }
    return Rational(nu / rho);
  });
  return {ratio};
}

IntervalUnion zero_set(const IntervalSpace& X, const IntervalDensity& d) {
  return measure_support(X).intersect(d.value.where([](const Rational& v) { return sgn(v) == 0; }));
}

bool density_bounded(const IntervalSpace&, const IntervalDensity&) { return true; }

bool is_nonsingular(const IntervalSpace& X, const PiecewiseAffineMap& T) {
  for (const AffineBranch& br : T.branches) {
    if (sgn(br.slope) == 0 && !measure_of(X, one(br.domain)).is_zero()) return false;
  }
  return true;
}

bool measure_nonincreasing_forward(const IntervalSpace& X, const PiecewiseAffineMap& T) {
  // mu(T(A)) <= mu(A) for all A iff rho(T x) |a| <= rho(x) a.e. on each branch.
  for (const AffineBranch& br : T.branches) {
    if (sgn(br.slope) == 0) continue;
    IntervalUnion d = one(br.domain);
    Rational a = abs(br.slope);
    for (const auto& [img_span, img_rho] : X.density.restricted(d.affine_image(br.slope, br.intercept))) {
      IntervalUnion back = d.intersect(one(img_span).affine_preimage(br.slope, br.intercept));
      for (const auto& [span, rho] : X.density.restricted(back)) {
        if (img_rho * a > rho) return false;
      }
    }
  }
  return true;
}

IntervalWeight constant_weight(const IntervalSpace&, const ComplexRational& c) {
  return {PiecewiseFn<AffinePiece>(AffinePiece{c, ComplexRational(0)}), ""};
}

IntervalUnion weight_zero_set(const IntervalSpace& X, const IntervalWeight& u) {
  return measure_support(X).intersect(u.pieces.where([](const AffinePiece& p) { return p.is_zero(); }));
}

IntervalWeight restrict_weight(const IntervalSpace&, const IntervalWeight& u, const IntervalUnion& s) {
  return {PiecewiseFn<AffinePiece>::from_assignments(u.pieces.restricted(s), AffinePiece{}), u.null_note};
}

std::optional<std::vector<std::pair<ComplexRational, IntervalUnion>>> weight_levels(const IntervalSpace& X,
                                                                                   const IntervalWeight& u) {
  IntervalUnion live = measure_support(X);
  std::vector<std::pair<ComplexRational, IntervalUnion>> out;
  for (const auto& [span, p] : u.pieces.restricted(live)) {
    if (!p.is_constant()) return std::nullopt;
    if (p.alpha.is_zero()) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& lv) { return lv.first == p.alpha; });
    if (it == out.end()) {
      out.emplace_back(p.alpha, one(span));
    } else {
      it->second = it->second.unite(one(span));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::optional<Rational> weight_ess_sup_sq(const IntervalSpace& X, const IntervalWeight& u) {
  Rational best = 0;
  for (const auto& [span, p] : u.pieces.restricted(measure_support(X))) {
    auto s = sup_on(sq_of(p), span);
    if (!s) return std::nullopt;
    best = std::max(best, *s);
  }
  return best;
}

Rational weight_ess_inf_sq(const IntervalSpace& X, const IntervalWeight& u) {
  std::optional<Rational> best;
  for (const auto& [span, p] : u.pieces.restricted(measure_support(X))) {
    auto m = inf_on(sq_of(p), span);
    if (m) best = best ? std::min(*best, *m) : *m;
  }
  return best.value_or(Rational(0));
}

std::optional<Rational> weight_ess_inf_point(const IntervalSpace& X, const IntervalWeight& u) {
  Rational target = weight_ess_inf_sq(X, u);
  for (const auto& [span, p] : u.pieces.restricted(measure_support(X))) {
    Quadratic q = sq_of(p);
    std::vector<Rational> candidates;
    if (span.lo.is_finite()) candidates.push_back(span.lo.value());
    if (span.hi.is_finite()) candidates.push_back(span.hi.value());
    if (sgn(q.c2) > 0) candidates.push_back(-q.c1 / (2 * q.c2));
    for (const Rational& x : candidates) {
      if (span.lo <= ExtRational(x) && ExtRational(x) <= span.hi && q.at(x) == target) return x;
    }
  }
  return std::nullopt;
}

std::optional<bool> eps_sets_invariant(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalWeight& u) {
  // T(A_eps) in A_eps for all eps iff |u(T x)| >= |u(x)| a.e.
  IntervalUnion live = measure_support(X);
  for (const AffineBranch& br : T.branches) {
    IntervalUnion d = one(br.domain).intersect(live);
    if (d.empty()) continue;
    if (sgn(br.slope) == 0) {
      std::optional<AffinePiece> target;
      for (const auto& piece : u.pieces.pieces()) {
        if (piece.span.contains(br.intercept)) target = piece.value;
      }
      if (!target) return std::nullopt;
      Rational val = (ComplexRational(target->alpha) + target->beta * ComplexRational(br.intercept)).norm_sq();
      for (const auto& [span, p] : u.pieces.restricted(d)) {
        Quadratic q = sq_of(p);
        auto s = sup_on(q, span);
        if (!s || *s > val) return false;
      }
      continue;
    }
    for (const auto& [span, p] : u.pieces.restricted(d)) {
      IntervalUnion img = one(span).affine_image(br.slope, br.intercept);
      for (const auto& [img_span, p_img] : u.pieces.restricted(img)) {
        IntervalUnion back = one(span).intersect(one(img_span).affine_preimage(br.slope, br.intercept));
        Quadratic lhs = sq_of(substitute(p_img, br.slope, br.intercept));
        Quadratic rhs = sq_of(p);
        Quadratic gap{lhs.c2 - rhs.c2, lhs.c1 - rhs.c1, lhs.c0 - rhs.c0};
        for (const Interval& k : back.parts()) {
          auto m = inf_on(gap, k);
          if (!m || sgn(*m) < 0) return false;
        }
      }
    }
  }
  return true;
}

IntervalUnion collision_set(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s) {
  IntervalUnion out;
  const auto& bs = T.branches;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    IntervalUnion di = one(bs[i].domain).intersect(s);
    if (di.empty()) continue;
    if (sgn(bs[i].slope) == 0) {
      if (!measure_of(X, di).is_zero()) out = out.unite(di);
      continue;
    }
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j == i || sgn(bs[j].slope) == 0) continue;
      IntervalUnion dj = one(bs[j].domain).intersect(s);
      IntervalUnion hit = dj.affine_image(bs[j].slope, bs[j].intercept);
      out = out.unite(di.intersect(hit.affine_preimage(bs[i].slope, bs[i].intercept)));
    }
  }
  return out;
}

IntervalUnion non_representative_set(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s) {
  IntervalUnion out;
  const auto& bs = T.branches;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    IntervalUnion di = one(bs[i].domain).intersect(s);
    if (di.empty()) continue;
    if (sgn(bs[i].slope) == 0) {
      // The leftmost point of a constant fiber is a single point.
      if (!measure_of(X, di).is_zero()) out = out.unite(di);
      continue;
    }
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j == i || sgn(bs[j].slope) == 0) continue;
      IntervalUnion dj = one(bs[j].domain).intersect(s);
      // Mate of x through branch j: phi(x) = (a_i x + b_i - b_j) / a_j.
      Rational ps = bs[i].slope / bs[j].slope;
      Rational pc = (bs[i].intercept - bs[j].intercept) / bs[j].slope;
      IntervalUnion mated = di.intersect(dj.affine_preimage(ps, pc));
      // phi(x) < x  <=>  (ps - 1) x + pc < 0
      Rational lin = ps - 1;
      IntervalUnion below;
      if (sgn(lin) == 0) {
        below = sgn(pc) < 0 ? IntervalUnion::whole_line() : IntervalUnion();
      } else {
        Rational root = -pc / lin;
        below = sgn(lin) > 0 ? IntervalUnion::single(ExtRational::neg_inf(), root)
                             : IntervalUnion::single(root, ExtRational::pos_inf());
      }
      out = out.unite(mated.intersect(below));
    }
  }
  return out;
}

std::vector<IntervalUnion> fiber_classes(const IntervalSpace& X, const PiecewiseAffineMap& T, const IntervalUnion& s) {
  std::vector<std::pair<Rational, IntervalUnion>> groups;
  for (const AffineBranch& b : T.branches) {
    if (sgn(b.slope) != 0) continue;
    IntervalUnion part = one(b.domain).intersect(s);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == b.intercept; });
    if (it == groups.end()) {
      groups.emplace_back(b.intercept, part);
    } else {
      it->second = it->second.unite(part);
    }
  }
  std::vector<IntervalUnion> out;
  for (auto& [c, set] : groups) {
    if (!measure_of(X, set).is_zero()) out.push_back(std::move(set));
  }
  return out;
}

std::vector<FamilyNode<IntervalUnion>> family_roots(const IntervalSpace& X, const FamilyOptions& opt) {
  std::vector<FamilyNode<IntervalUnion>> out;
  for (std::int64_t m = -opt.window; m < opt.window; ++m) {
    Rational lo(static_cast<long>(m));
    IntervalUnion cell = IntervalUnion::single(lo, Rational(lo + 1)).intersect(X.carrier);
    if (measure_of(X, cell).is_zero()) continue;
    out.push_back({cell, 0, lo});
  }
  return out;
}

std::vector<FamilyNode<IntervalUnion>> family_children(const IntervalSpace& X, const FamilyNode<IntervalUnion>& node,
                                                       const FamilyOptions& opt) {
  std::vector<FamilyNode<IntervalUnion>> out;
  if (node.depth >= opt.depth) return out;
  Rational half = Rational(1) / pow_int(Rational(2), static_cast<unsigned>(node.depth + 1));
  for (int side = 0; side < 2; ++side) {
    Rational lo = node.cell_lo + half * side;
    IntervalUnion cell = IntervalUnion::single(lo, Rational(lo + half)).intersect(X.carrier);
    if (measure_of(X, cell).is_zero()) continue;
    out.push_back({cell, node.depth + 1, lo});
  }
  return out;
}

std::vector<IntervalUnion> atoms_of(const IntervalSpace&, const IntervalUnion&) { return {}; }

std::string describe(const IntervalSpace&, const IntervalUnion& a) { return to_string(a); }

std::string describe(const IntervalSpace&, const PiecewiseAffineMap& T) {
  std::string out;
  for (const AffineBranch& br : T.branches) {
    if (!out.empty()) out += "; ";
    out += to_string(br.domain) + ": " + to_string(br.slope) + "x";
    if (sgn(br.intercept) >= 0) out += "+";
    out += to_string(br.intercept);
  }
  return out;
}

std::string describe(const IntervalSpace& X, const IntervalWeight& u) {
  std::string out;
  for (const auto& [span, p] : u.pieces.restricted(X.carrier)) {
    if (!out.empty()) out += "; ";
    out += to_string(span) + ": " + to_string(p.alpha);
    if (!p.beta.is_zero()) out += " + (" + to_string(p.beta) + ")x";
  }
  if (!u.null_note.empty()) out += " [a.e.; " + u.null_note + "]";
  return out;
}

}  // namespace lorentz_ops
