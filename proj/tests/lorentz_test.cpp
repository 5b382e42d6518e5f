#include <gtest/gtest.h>

#include <cmath>

#include "lorentz_ops/lorentz.hpp"
#include "test_support.hpp"

using namespace lorentz_ops;
using lorentz_ops::testing::Gen;

namespace {

LorentzIndex idx(const std::string& p, const std::string& q) { return LorentzIndex(parse_ext_rational(p), parse_ext_rational(q)); }

/// 3 on an atom of mass 1, 1 on an atom of mass 2.
LevelProfile two_atom_profile() {
  FiniteSpace X({"a", "b"}, {Rational(1), Rational(2)});
  SimpleFunction<FiniteSpace> h;
  h.pieces.emplace_back(ComplexRational(3), make_atom_set(X, {0}));
  h.pieces.emplace_back(ComplexRational(1), make_atom_set(X, {1}));
  return profile_of(X, h);
}

/// sum |c|^p mu(level), straight from the levels.
Rational lp_power(const std::vector<std::pair<Rational, ExtRational>>& levels, unsigned p) {
  Rational sum = 0;
  for (const auto& [sq, m] : levels) {
    Rational c = *exact_sqrt(sq);
    sum += pow_int(c, p) * m.value();
  }
  return sum;
}

Real rel_err(Real a, Real b) { return std::fabs(a - b) / std::max<Real>(std::fabs(b), 1e-300L); }

}  // namespace

TEST(Distribution, TwoAtomThresholds) {
  LevelProfile h = two_atom_profile();
  EXPECT_EQ(distribution(h, 0), ExtRational(3));
  EXPECT_EQ(distribution(h, 2), ExtRational(1));
  EXPECT_EQ(distribution(h, 3), ExtRational(0));
}

TEST(Distribution, ZeroFunction) {
  LevelProfile h = make_profile({});
  for (int s : {0, 1, 5}) EXPECT_TRUE(distribution(h, s).is_zero());
}

TEST(Distribution, IntervalIndicator) {
  IntervalSpace X(IntervalUnion({parse_interval("[0,1]")}));
  LevelProfile h = profile_of(X, indicator<IntervalSpace>(IntervalUnion({parse_interval("[1/4,1/2]")})));
  EXPECT_EQ(distribution(h, Rational(1, 2)), ExtRational(Rational(1, 4)));
}

TEST(Rearrangement, TwoAtomSteps) {
  StepFunction s = rearrangement(two_atom_profile());
  ASSERT_EQ(s.breaks.size(), 2u);
  EXPECT_EQ(s.breaks[0], ExtRational(1));
  EXPECT_EQ(s.breaks[1], ExtRational(3));
  EXPECT_EQ(s.values[0].sq, Rational(9));
  EXPECT_EQ(s.values[1].sq, Rational(1));
  EXPECT_EQ(s.at(Rational(7, 2)).sq, Rational(0));
}

TEST(Rearrangement, ScaledIndicator) {
  StepFunction s = rearrangement(make_profile({{Rational(25, 4), ExtRational(Rational(2, 3))}}));
  EXPECT_EQ(s.at(0).sq, Rational(25, 4));
  EXPECT_EQ(s.at(Rational(1, 2)).sq, Rational(25, 4));
  EXPECT_EQ(s.at(Rational(2, 3)).sq, Rational(0));
}

TEST(Rearrangement, ZeroFunction) {
  StepFunction s = rearrangement(make_profile({}));
  EXPECT_EQ(s.at(0).sq, Rational(0));
  EXPECT_EQ(s.at(5).sq, Rational(0));
}

TEST(Rearrangement, InfiniteTopLevelIsConstant) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(1)}, {Rational(4), ExtRational::pos_inf()}}));
  ASSERT_EQ(s.breaks.size(), 1u);
  EXPECT_TRUE(s.breaks[0].is_pos_inf());
  EXPECT_EQ(s.at(1000).sq, Rational(4));
  EXPECT_TRUE(norm(s, idx("3", "2")).diverges);
  EXPECT_EQ(norm(s, idx("inf", "inf")).value, 2);
}

TEST(Average, IndicatorProfile) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(2)}}));
  EXPECT_EQ(*average_exact(s, 1), Rational(1));
  EXPECT_EQ(*average_exact(s, 2), Rational(1));
  EXPECT_EQ(*average_exact(s, 8), Rational(1, 4));
}

TEST(Average, TwoAtomAtTwo) {
  StepFunction s = rearrangement(two_atom_profile());
  EXPECT_EQ(*average_exact(s, 2), Rational(2));
  EXPECT_NEAR(static_cast<double>(average_function(s, Rational(1, 1000000))), 3.0, 1e-12);
}

TEST(QuasiNorm, IndicatorOfUnitMass) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(1)}}));
  NormValue v = quasi_norm(s, idx("2", "2"));
  EXPECT_EQ(*v.exact_power, Rational(1));
  EXPECT_NEAR(static_cast<double>(v.value), 1.0, 1e-15);
}

TEST(QuasiNorm, ZeroFunction) {
  NormValue v = quasi_norm(rearrangement(make_profile({})), idx("3", "2"));
  EXPECT_EQ(v.value, 0);
}

TEST(Norm, IndicatorOfUnitMassIsSqrtTwo) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(1)}}));
  NormValue v = norm(s, idx("2", "2"));
  EXPECT_NEAR(static_cast<double>(v.value), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(static_cast<double>(char_norm_closed_form(ExtRational(1), idx("2", "2"))), std::sqrt(2.0), 1e-15);
}

TEST(Norm, ZeroFunction) {
  EXPECT_EQ(norm(rearrangement(make_profile({})), idx("2", "inf")).value, 0);
}

TEST(Norm, WeakTypeIndicator) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(4)}}));
  EXPECT_NEAR(static_cast<double>(norm(s, idx("2", "inf")).value), 2.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(char_norm_closed_form(ExtRational(4), idx("2", "inf"))), 2.0, 1e-15);
}

TEST(Norm, DivergesOnInfiniteSupport) {
  StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational::pos_inf()}}));
  EXPECT_TRUE(norm(s, idx("2", "2")).diverges);
  EXPECT_TRUE(quasi_norm(s, idx("2", "2")).diverges);
}

TEST(Index, AdmissibleRange) {
  EXPECT_ANY_THROW(idx("1", "2"));
  EXPECT_ANY_THROW(idx("2", "1/2"));
  EXPECT_ANY_THROW(idx("inf", "2"));
  EXPECT_NO_THROW(idx("inf", "inf"));
  EXPECT_NO_THROW(idx("3/2", "1"));
}

TEST(ZeroAe, Cases) {
  EXPECT_TRUE(is_zero_ae(make_profile({})));
  EXPECT_FALSE(is_zero_ae(make_profile({{Rational(1), ExtRational(Rational(1, 3))}})));
  IntervalSpace X(IntervalUnion({parse_interval("[0,1]")}));
  IntervalUnion point({Interval{ExtRational(Rational(1, 2)), ExtRational(Rational(1, 2))}});
  EXPECT_TRUE(is_zero_ae(profile_of(X, indicator<IntervalSpace>(point, ComplexRational(7)))));
}

// Properties over random simple functions.

TEST(RearrangementProperty, Equimeasurable) {
  Gen g(21);
  for (int i = 0; i < 200; ++i) {
    LevelProfile h = make_profile(g.levels(5, false));
    StepFunction s = rearrangement(h);
    std::vector<Rational> probes{0};
    for (const auto& [sq, m] : h.levels) {
      probes.push_back(*exact_sqrt(sq));
      probes.push_back(*exact_sqrt(sq) / 2);
    }
    for (const Rational& t : probes) {
      ExtRational len = 0;
      ExtRational prev = 0;
      for (std::size_t j = 0; j < s.breaks.size(); ++j) {
        if (s.values[j].sq > t * t) len += s.breaks[j] - prev;
        prev = s.breaks[j];
      }
      EXPECT_EQ(len, distribution(h, t));
    }
  }
}

TEST(RearrangementProperty, NonincreasingAndDominatedByAverage) {
  Gen g(22);
  for (int i = 0; i < 200; ++i) {
    StepFunction s = rearrangement(make_profile(g.levels(5, false)));
    for (std::size_t j = 1; j < s.values.size(); ++j) EXPECT_GE(s.values[j - 1].sq, s.values[j].sq);
    Real prev_avg = INFINITY;
    for (int t4 = 1; t4 <= 60; ++t4) {
      Rational t = lorentz_ops::testing::ratio(t4, 4);
      auto avg = average_exact(s, t);
      ASSERT_TRUE(avg.has_value());
      EXPECT_GE(Rational(*avg * *avg), s.at(t).sq);
      Real a = average_function(s, t);
      EXPECT_LE(a, prev_avg + 1e-15L);
      prev_avg = a;
    }
  }
}

TEST(NormProperty, HomogeneousInRationalScalars) {
  Gen g(23);
  for (int i = 0; i < 200; ++i) {
    auto levels = g.levels(4, false);
    Rational c = g.positive(5, 3);
    auto scaled = levels;
    for (auto& [sq, m] : scaled) sq *= c * c;
    for (const auto& ix : {idx("2", "2"), idx("3", "1"), idx("3/2", "inf"), idx("2", "3")}) {
      StepFunction a = rearrangement(make_profile(levels));
      StepFunction b = rearrangement(make_profile(scaled));
      NormValue qa = quasi_norm(a, ix);
      NormValue qb = quasi_norm(b, ix);
      if (qa.exact_power && qb.exact_power) {
        Rational factor = ix.q_infinite() ? c : pow_int(c, *ix.q_integer());
        EXPECT_EQ(*qb.exact_power, Rational(*qa.exact_power * factor));
      }
      Real cr = to_real(c);
      if (qa.value > 0) EXPECT_LE(rel_err(qb.value, cr * qa.value), 1e-14L);
      Real na = norm(a, ix).value;
      Real nb = norm(b, ix).value;
      if (na > 0) EXPECT_LE(rel_err(nb, cr * na), 1e-11L);
    }
  }
}

TEST(NormProperty, QuasiNormBelowNormBelowHardyBound) {
  Gen g(24);
  for (int i = 0; i < 200; ++i) {
    StepFunction s = rearrangement(make_profile(g.levels(5, false)));
    for (const auto& ix : {idx("2", "1"), idx("2", "2"), idx("3", "2"), idx("2", "inf"), idx("5/2", "4")}) {
      Real q = quasi_norm(s, ix).value;
      Real n = norm(s, ix).value;
      EXPECT_LE(q, n * (1 + 1e-12L));
      EXPECT_LE(n, ix.p_conjugate().to_real() * q * (1 + 1e-12L) + 1e-300L);
    }
  }
}

TEST(NormProperty, QuasiNormIsLpNormOnDiagonal) {
  Gen g(25);
  for (int i = 0; i < 200; ++i) {
    auto levels = g.levels(5, false);
    StepFunction s = rearrangement(make_profile(levels));
    for (unsigned p : {2u, 3u}) {
      std::string ps = std::to_string(p);
      NormValue v = quasi_norm(s, idx(ps, ps));
      ASSERT_TRUE(v.exact_power.has_value());
      EXPECT_EQ(*v.exact_power, lp_power(levels, p));
    }
  }
}

TEST(NormProperty, IndicatorMatchesClosedForm) {
  Gen g(26);
  for (int i = 0; i < 100; ++i) {
    Rational m = g.positive(9, 4);
    StepFunction s = rearrangement(make_profile({{Rational(1), ExtRational(m)}}));
    for (const auto& ix : {idx("2", "1"), idx("2", "2"), idx("3", "2"), idx("2", "inf"), idx("inf", "inf")}) {
      EXPECT_LE(rel_err(norm(s, ix).value, char_norm_closed_form(ExtRational(m), ix)), 1e-9L);
    }
  }
}

TEST(NormProperty, FourWayZeroEquivalence) {
  Gen g(27);
  for (int i = 0; i < 200; ++i) {
    auto levels = g.levels(3, false);
    if (g.coin(0.3)) levels.clear();
    if (g.coin(0.2)) {
      for (auto& [sq, m] : levels) m = ExtRational(0);
    }
    LevelProfile h = make_profile(levels);
    StepFunction s = rearrangement(h);
    bool zero = is_zero_ae(h);
    EXPECT_EQ(zero, distribution(h, 0).is_zero());
    EXPECT_EQ(zero, norm(s, idx("2", "2")).value == 0);
    EXPECT_EQ(zero, quasi_norm(s, idx("3", "inf")).value == 0);
  }
}

TEST(NormProperty, InfiniteLowerLevelsStillRearrange) {
  Gen g(28);
  for (int i = 0; i < 50; ++i) {
    auto levels = g.levels(3, false);
    Rational top = 0;
    for (const auto& [sq, m] : levels) top = std::max(top, sq);
    if (sgn(top) == 0) continue;
    levels.emplace_back(Rational(top / 4), ExtRational::pos_inf());
    StepFunction s = rearrangement(make_profile(levels));
    EXPECT_TRUE(norm(s, idx("2", "2")).diverges);
    EXPECT_FALSE(norm(s, idx("inf", "inf")).diverges);
  }
}
