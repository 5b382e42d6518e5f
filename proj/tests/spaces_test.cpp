#include <gtest/gtest.h>

#include "lorentz_ops/catalog.hpp"
#include "test_support.hpp"

using namespace lorentz_ops;
using lorentz_ops::testing::Gen;

namespace {

IntervalUnion iv(const std::string& text) { return IntervalUnion({parse_interval(text)}); }

IntervalSpace unit_interval() { return IntervalSpace(iv("[0,1]")); }

PiecewiseAffineMap affine(const std::string& domain, const Rational& a, const Rational& b) {
  return PiecewiseAffineMap{{AffineBranch{parse_interval(domain), a, b}}};
}

OperatorSpec<CountableSpace> even_ceiling() { return std::get<OperatorSpec<CountableSpace>>(load_entry(*find_entry("even-ceiling")).instance); }

/// T(1) = 1, T(n) = n - 1 beyond.
TailResidueMap backward_shift() { return TailResidueMap(1, {{1, 1}}, {TailRule{TailRule::Kind::Shift, -1}}); }

}  // namespace

TEST(Measure, FiniteAdditivity) {
  FiniteSpace X({"a", "b"}, {Rational(1), Rational(2)});
  EXPECT_EQ(measure_of(X, full_set(X)), ExtRational(3));
}

TEST(Measure, CountingMeasureOfEvenTailIsInfinite) {
  CountableSpace X = CountableSpace::counting();
  EXPECT_TRUE(measure_of(X, residue_tail(0, 0, 2)).is_pos_inf());
}

TEST(Measure, LebesgueLength) {
  EXPECT_EQ(measure_of(unit_interval(), iv("[1/4,1/2]")), ExtRational(Rational(1, 4)));
}

TEST(Preimage, EvenCeilingMapPullsTwoBackToOneAndTwo) {
  auto op = even_ceiling();
  EXPECT_EQ(preimage(op.space, op.T, make_structured_set({2}), 1), make_structured_set({1, 2}));
}

TEST(Preimage, EmptySet) {
  auto op = even_ceiling();
  EXPECT_TRUE(is_null(op.space, preimage(op.space, op.T, empty_set(op.space), 3)));
}

TEST(Preimage, HalvingPullsQuarterIntervalToUpperHalf) {
  IntervalSpace X = unit_interval();
  auto T = affine("[0,1]", Rational(1, 2), 0);
  EXPECT_EQ(preimage(X, T, iv("(1/4,1/2)"), 1), iv("(1/2,1)"));
}

TEST(Preimage, IdentityIsStable) {
  FiniteSpace X = FiniteSpace::uniform(4);
  AtomSet a = make_atom_set(X, {0, 2});
  EXPECT_EQ(preimage(X, identity_map(X), a, 5), a);
}

TEST(ForwardImage, HalvingTwice) {
  IntervalSpace X = unit_interval();
  auto T = affine("[0,1]", Rational(1, 2), 0);
  EXPECT_EQ(forward_image(X, T, iv("[0,1]"), 2), iv("[0,1/4]"));
}

TEST(ForwardImage, BackwardShiftIsOnto) {
  CountableSpace X = CountableSpace::counting();
  EXPECT_EQ(forward_image(X, backward_shift(), full_set(X), 1), full_set(X));
}

TEST(Pushforward, EvenCeilingDensity) {
  auto op = even_ceiling();
  CountableDensity h = radon_nikodym(op.space, op.T, 1);
  for (std::uint64_t n = 1; n <= 12; ++n) {
    EXPECT_EQ(h.value.at(n), n % 2 == 1 ? Rational(0) : Rational(2)) << n;
  }
  CountableMeasure m1 = pushforward(op.space, op.T, 1);
  EXPECT_EQ(measure_of(op.space, m1, make_structured_set({2})), ExtRational(2));
  EXPECT_TRUE(measure_of(op.space, m1, residue_tail(0, 1, 2)).is_zero());
}

TEST(Pushforward, IdentityKeepsMeasure) {
  FiniteSpace X({"a", "b", "c"}, {Rational(1), Rational(2, 3), Rational(5)});
  EXPECT_EQ(pushforward(X, identity_map(X), 3), base_measure(X));
}

TEST(Pushforward, DensityAtZeroIsOne) {
  IntervalSpace X = unit_interval();
  auto T = affine("[0,1]", Rational(1, 2), 0);
  EXPECT_TRUE(is_null(X, zero_set(X, radon_nikodym(X, T, 0))));
  IntervalDensity d = radon_nikodym(X, T, 0);
  for (const auto& [span, v] : d.value.restricted(X.carrier)) EXPECT_EQ(v, Rational(1));
}

TEST(Nonsingular, PositiveAtomsAlwaysNonsingular) {
  Gen g(11);
  for (int i = 0; i < 20; ++i) {
    FiniteSpace X = g.finite_space(5);
    EXPECT_TRUE(is_nonsingular(X, g.atom_map(X.size())));
  }
}

TEST(Nonsingular, ConstantBranchIsSingular) {
  EXPECT_FALSE(is_nonsingular(unit_interval(), affine("[0,1]", 0, Rational(1, 2))));
}

TEST(Nonsingular, HalvingIsNonsingular) {
  EXPECT_TRUE(is_nonsingular(unit_interval(), affine("[0,1]", Rational(1, 2), 0)));
}

TEST(AbsoluteContinuity, EvenCeilingMeasures) {
  auto op = even_ceiling();
  auto m0 = pushforward(op.space, op.T, 0);
  auto m1 = pushforward(op.space, op.T, 1);
  auto m2 = pushforward(op.space, op.T, 2);
  EXPECT_TRUE(abs_continuous(op.space, m1, m0));
  EXPECT_FALSE(abs_continuous(op.space, m0, m1));
  EXPECT_TRUE(equivalent(op.space, m2, m1));
  EXPECT_TRUE(equivalent(op.space, m0, m0));
}

TEST(ZeroSet, EvenCeilingOddAtoms) {
  auto op = even_ceiling();
  EXPECT_EQ(zero_set(op.space, radon_nikodym(op.space, op.T, 1)), residue_tail(0, 1, 2));
}

TEST(ZeroSet, HalvingUpperHalf) {
  IntervalSpace X = unit_interval();
  auto T = affine("[0,1]", Rational(1, 2), 0);
  EXPECT_EQ(zero_set(X, radon_nikodym(X, T, 1)), iv("(1/2,1]"));
  EXPECT_TRUE(zero_set(X, radon_nikodym(X, T, 0)).empty());
}

TEST(ZeroSet, MonotoneInK) {
  Gen g(12);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + g.below(7);
    FiniteSpace X = g.finite_space(n);
    AtomMap T = g.atom_map(n);
    for (unsigned k = 0; k < 6; ++k) {
      EXPECT_TRUE(subset_ae(X, zero_set(X, radon_nikodym(X, T, k)), zero_set(X, radon_nikodym(X, T, k + 1))));
    }
  }
  IntervalSpace X = unit_interval();
  auto T = affine("[0,1]", Rational(1, 2), 0);
  for (unsigned k = 0; k < 6; ++k) {
    EXPECT_TRUE(subset_ae(X, zero_set(X, radon_nikodym(X, T, k)), zero_set(X, radon_nikodym(X, T, k + 1))));
  }
}

TEST(MeasureNonincreasing, BackwardShiftOnCounting) {
  EXPECT_TRUE(measure_nonincreasing_forward(CountableSpace::counting(), backward_shift()));
}

TEST(MeasureNonincreasing, HalvingOnLebesgue) {
  EXPECT_TRUE(measure_nonincreasing_forward(unit_interval(), affine("[0,1]", Rational(1, 2), 0)));
}

TEST(MeasureNonincreasing, LightAtomOntoHeavyAtom) {
  FiniteSpace X({"a", "b"}, {Rational(1), Rational(3)});
  EXPECT_FALSE(measure_nonincreasing_forward(X, AtomMap{{1, 1}}));
}

TEST(MeasureNonincreasing, AgreesWithSubsetEnumeration) {
  Gen g(13);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + g.below(5);
    FiniteSpace X = g.finite_space(n);
    AtomMap T = g.atom_map(n);
    bool brute = true;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      AtomSet a;
      for (std::size_t j = 0; j < n; ++j) a.bits.push_back((mask >> j) & 1);
      if (measure_of(X, image1(X, T, a)) > measure_of(X, a)) brute = false;
    }
    EXPECT_EQ(measure_nonincreasing_forward(X, T), brute);
  }
}

TEST(Pushforward, MatchesPreimageMeasure) {
  Gen g(14);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + g.below(7);
    FiniteSpace X = g.finite_space(n);
    AtomMap T = g.atom_map(n);
    unsigned k = static_cast<unsigned>(g.below(4));
    AtomSet a = g.atom_set(n);
    EXPECT_EQ(measure_of(X, pushforward(X, T, k), a), measure_of(X, preimage(X, T, a, k)));
  }
}

TEST(Preimage, CommutesWithSetOperations) {
  Gen g(15);
  CountableSpace X = CountableSpace::counting();
  TailResidueMap T = even_ceiling().T;
  for (int i = 0; i < 100; ++i) {
    IntervalSpace I = unit_interval();
    IntervalUnion a = g.interval_union(3).intersect(I.carrier);
    IntervalUnion b = g.interval_union(3).intersect(I.carrier);
    auto H = affine("[0,1]", Rational(1, 2), 0);
    EXPECT_EQ(preimage1(I, H, unite(a, b)), unite(preimage1(I, H, a), preimage1(I, H, b)));
    EXPECT_EQ(preimage1(I, H, intersect(a, b)), intersect(preimage1(I, H, a), preimage1(I, H, b)));

    std::uint64_t m = 1 + g.below(3);
    StructuredSet s = unite(make_structured_set({1 + g.below(9), 1 + g.below(9)}), residue_tail(g.below(6), g.below(m), m));
    StructuredSet t = make_structured_set({1 + g.below(9)});
    EXPECT_EQ(preimage1(X, T, minus(s, t)), minus(preimage1(X, T, s), preimage1(X, T, t)));
  }
}
