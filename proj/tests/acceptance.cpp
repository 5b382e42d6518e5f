// One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "lorentz_ops/catalog.hpp"
#include "lorentz_ops/report.hpp"
#include "test_support.hpp"

using namespace lorentz_ops;
using lorentz_ops::testing::Gen;

namespace {

using Clock = std::chrono::steady_clock;

/// Collects the first few failure notes of one criterion.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures < 5) notes << "\n    failed: " << what;
    ++failures;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

template <class S>
OperatorSpec<S> entry(const std::string& id) {
  return std::get<OperatorSpec<S>>(load_entry(*find_entry(id)).instance);
}

LorentzIndex idx(const std::string& p, const std::string& q) {
  return LorentzIndex(parse_ext_rational(p), parse_ext_rational(q));
}

IntervalUnion iv(const std::string& text) { return IntervalUnion({parse_interval(text)}); }

Real rel_err(Real a, Real b) {
  if (a == b) return 0;
  return std::fabs(a - b) / std::max<Real>(std::fabs(b), 1e-300L);
}

std::string str(const Verdict& v) { return to_string(v); }

void catalog_criterion(Tally& t) {
  for (const auto& e : catalog()) {
    InstanceConfig c = load_entry(e);
    RunOptions o;
    o.timings = false;
    auto start = Clock::now();
    AnalysisReport r = analyze(c, o);
    double s = seconds_since(start);
    t.expect(r.exit_code() == kOk, e.id + " exit code " + std::to_string(r.exit_code()));
    t.expect(s < 1.0, e.id + " took " + std::to_string(s) + " s");
  }

  auto lin = entry<IntervalSpace>("mult-linear-weight");
  t.expect(mult_ascent(lin).verdict == Verdict::exact(0), "mult-linear-weight ascent");
  t.expect(mult_descent(lin).verdict.is(VerdictKind::SymbolicInfinite), "mult-linear-weight descent");
  t.expect(mult_ascent(entry<IntervalSpace>("mult-half-support")).verdict == Verdict::exact(1),
           "mult-half-support ascent");

  {
    auto op = entry<CountableSpace>("even-ceiling");
    auto h = hypotheses(op);
    auto fam = SetFamily<CountableSpace>::build(op, 11);
    auto m = ascent_via_measures(op, 10, fam, h);
    auto g = ascent_geometric(op, 10, fam, h);
    t.expect(m.verdict == Verdict::exact(1) && replay_all(op, m), "even-ceiling measures " + str(m.verdict));
    t.expect(g.verdict == Verdict::exact(1) && replay_all(op, g), "even-ceiling geometric " + str(g.verdict));
  }
  {
    auto op = entry<IntervalSpace>("halving-interval");
    auto fam = SetFamily<IntervalSpace>::build(op, 11);
    auto r = infinite_ascent_witnesses(op, 10, fam);
    bool ok = r.verdict.is(VerdictKind::InfiniteCertified) && replay_all(op, r) && !r.certificates.empty();
    if (ok) {
      const auto& sets = std::get<InfiniteAscentWitnessesCert<IntervalSpace>>(r.certificates[0]).sets;
      ok = sets.size() == 11;
      for (unsigned k = 0; ok && k <= 10; ++k) {
        Rational hi = pow_int(Rational(1, 2), k);
        ok = equal_ae(op.space, sets[k], IntervalUnion::single(Rational(hi / 2), hi));
      }
    }
    t.expect(ok, "halving witnesses (2^-(k+1), 2^-k) for k <= 10");
  }
  {
    auto op = entry<IntervalSpace>("plateau-shift");
    auto h = hypotheses(op);
    auto fam = SetFamily<IntervalSpace>::build(op, 11);
    auto r = infinite_descent_paired(op, 10, fam, h);
    bool ok = r.verdict.is(VerdictKind::InfiniteCertified) && replay_all(op, r) && !r.certificates.empty();
    if (ok) {
      const auto& items = std::get<PairedDescentCert<IntervalSpace>>(r.certificates[0]).items;
      ok = items.size() == 11;
      for (const auto& it : items) {
        ok = ok && equal_ae(op.space, it.a1, iv("(0,1]")) && equal_ae(op.space, it.a2, iv("(1,2]"));
      }
    }
    t.expect(ok, "plateau paired witnesses (0,1], (1,2] for k <= 10");
  }
  {
    auto op = entry<IntervalSpace>("folding-halves");
    auto h = hypotheses(op);
    auto upper = descent_injectivity_bound(op, 10, h);
    bool bound = !upper.certificates.empty() &&
                 std::holds_alternative<InjectiveAEBoundCert<IntervalSpace>>(upper.certificates[0]) &&
                 std::get<InjectiveAEBoundCert<IntervalSpace>>(upper.certificates[0]).k == 1 &&
                 replay(op, upper.certificates[0]);
    t.expect(bound, "folding injectivity bound AtMost(1)");
    auto chi = indicator<IntervalSpace>(iv("[-1,0]"));
    auto r = descent_injectivity_bound(op, 10, h, {}, std::optional(chi));
    auto low = range_exclusion(op, chi, 0);
    t.expect(r.verdict == Verdict::exact(1) && replay_all(op, r) && low && replay_cert(op, *low),
             "folding Exact(1) with chi_[-1,0] " + str(r.verdict));
  }
  {
    auto op = entry<CountableSpace>("kernel-converse-gap");
    auto h = hypotheses(op);
    auto fam = SetFamily<CountableSpace>::build(op, 11);
    auto r = kernel_identification(op, 1, fam, h);
    bool ok = r.verdict.is(VerdictKind::SubsetOnly) && replay_all(op, r);
    if (ok) {
      const auto& sep = std::get<KernelModelCert<CountableSpace>>(r.certificates.at(0)).separating;
      ok = sep && equal_ae(op.space, *sep, make_structured_set({1}));
    }
    t.expect(ok, "kernel-converse-gap SubsetOnly with chi_{1}");
  }
  {
    auto op = entry<IntervalSpace>("hat-nonzero-gap");
    auto a = hat_operator_analysis(op, 10);
    t.expect(a.gate.verdict == Verdict::refused("u_nonzero_ae"), "hat gate " + str(a.gate.verdict));
    bool oracle = !a.oracle.witnesses.empty() && replay_all(op.with_kind(OperatorKind::WutHat), a.gate);
    t.expect(oracle, "hat oracle ascent >= 1: " + str(a.oracle.ascent));
  }
}

/// Criteria 2 and 3 share the instances.
void oracle_criteria(Tally& eq, Tally& taylor, double& elapsed) {
  Gen g(2024);
  auto start = Clock::now();
  for (int i = 0; i < 200; ++i) {
    auto op = g.kernel_hypothesis_instance(8);
    HypothesisReport h = hypotheses(op);
    auto fam = SetFamily<FiniteSpace>::build(op, 11);
    FiniteChainResult oracle = finite_ascent_descent(op);
    auto m = ascent_via_measures(op, 10, fam, h);
    std::string tag = "instance " + std::to_string(i);
    eq.expect(h.hT_zero_on_supp_complement.value_or(false), tag + " hypothesis not enforced");
    eq.expect(m.verdict == oracle.ascent, tag + ": " + str(m.verdict) + " vs " + str(oracle.ascent));
    auto geo = ascent_geometric(op, 10, fam, h);
    if (!geo.verdict.is(VerdictKind::Refused)) {
      eq.expect(geo.verdict == oracle.ascent, tag + " geometric: " + str(geo.verdict) + " vs " + str(oracle.ascent));
    }
    taylor.expect(oracle.ascent == oracle.descent && oracle.consistent,
                  tag + ": ascent " + str(oracle.ascent) + " descent " + str(oracle.descent));
  }
  elapsed = seconds_since(start);
  eq.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
}

void norm_criterion(Tally& t) {
  Gen g(4);
  const std::vector<LorentzIndex> indices{idx("2", "1"), idx("2", "2"), idx("3", "2"), idx("2", "inf"),
                                          idx("inf", "inf")};
  auto check = [&](const ExtRational& m, const NormValue& v, const LorentzIndex& ix, const std::string& tag) {
    Real want = char_norm_closed_form(m, ix);
    t.expect(!v.diverges && rel_err(v.value, want) <= 1e-9L, tag + " in L" + to_string(ix));
  };
  for (int i = 0; i < 50; ++i) {
    std::size_t n = 1 + g.below(8);
    FiniteSpace X = g.finite_space(n);
    AtomSet a = g.atom_set(n);
    for (const auto& ix : indices) check(measure_of(X, a), char_norm(X, a, ix), ix, "atomic set " + std::to_string(i));
  }
  for (int i = 0; i < 50; ++i) {
    IntervalSpace X(g.coin() ? iv("[-4,4]") : IntervalUnion({parse_interval("[-4,0]"), parse_interval("[1,4]")}));
    IntervalUnion a = intersect(g.interval_union(3), X.carrier);
    for (const auto& ix : indices) check(measure_of(X, a), char_norm(X, a, ix), ix, "interval set " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i) {
    auto levels = g.levels(5, false);
    StepFunction s = rearrangement(make_profile(levels));
    for (unsigned p : {2u, 3u}) {
      Rational direct = 0;
      for (const auto& [sq, m] : levels) direct += pow_int(*exact_sqrt(sq), p) * m.value();
      std::string ps = std::to_string(p);
      NormValue v = quasi_norm(s, idx(ps, ps));
      t.expect(v.exact_power && *v.exact_power == direct, "quasi-norm is the L^" + ps + " norm, function " +
                                                               std::to_string(i));
    }
  }
}

void rearrangement_criterion(Tally& t) {
  Gen g(5);
  for (int i = 0; i < 200; ++i) {
    std::string tag = "function " + std::to_string(i);
    auto levels = g.levels(5, false);
    if (g.coin(0.1)) levels.clear();
    LevelProfile h = make_profile(levels);
    StepFunction s = rearrangement(h);

    std::vector<Rational> probes{0};
    for (const auto& [sq, m] : h.levels) {
      probes.push_back(*exact_sqrt(sq));
      probes.push_back(*exact_sqrt(sq) / 2);
    }
    bool equi = true;
    for (const Rational& y : probes) {
      ExtRational len = 0;
      ExtRational prev = 0;
      for (std::size_t j = 0; j < s.breaks.size(); ++j) {
        if (s.values[j].sq > y * y) len += s.breaks[j] - prev;
        prev = s.breaks[j];
      }
      equi = equi && len == distribution(h, y);
    }
    t.expect(equi, tag + " equimeasurable");

    bool mono = true;
    for (std::size_t j = 1; j < s.values.size(); ++j) mono = mono && s.values[j - 1].sq >= s.values[j].sq;
    bool dominated = true;
    for (int t8 = 1; t8 <= 80; ++t8) {
      Rational x = lorentz_ops::testing::ratio(t8, 8);
      auto avg = average_exact(s, x);
      dominated = dominated && avg && Rational(*avg * *avg) >= s.at(x).sq;
    }
    t.expect(mono, tag + " h* nonincreasing");
    t.expect(dominated, tag + " h** >= h*");

    Rational c = g.positive(5, 3);
    auto scaled = levels;
    for (auto& [sq, m] : scaled) sq *= c * c;
    StepFunction sc = rearrangement(make_profile(scaled));
    bool homog = sc.breaks == s.breaks && sc.values.size() == s.values.size();
    for (std::size_t j = 0; homog && j < s.values.size(); ++j) homog = sc.values[j].sq == c * c * s.values[j].sq;
    for (int t4 = 1; homog && t4 <= 20; ++t4) {
      Rational x = lorentz_ops::testing::ratio(t4, 4);
      homog = average_exact(sc, x) == std::optional<Rational>(c * *average_exact(s, x));
    }
    NormValue qa = quasi_norm(s, idx("2", "2"));
    NormValue qb = quasi_norm(sc, idx("2", "2"));
    homog = homog && qa.exact_power && qb.exact_power && *qb.exact_power == c * c * *qa.exact_power;
    t.expect(homog, tag + " homogeneity");

    bool zero = is_zero_ae(h);
    bool four = zero == distribution(h, 0).is_zero() && zero == (norm(s, idx("2", "2")).value == 0) &&
                zero == (quasi_norm(s, idx("3", "inf")).value == 0);
    t.expect(four, tag + " zero equivalence");
  }
}

void sharpness_criterion(Tally& t) {
  {
    auto op = entry<CountableSpace>("odd-even-drift");
    auto h = hypotheses(op);
    auto fam = SetFamily<CountableSpace>::build(op, 11);
    auto geo = ascent_geometric(op, 10, fam, h);
    t.expect(geo.verdict == Verdict::refused("hT_zero_on_supp_complement"), "odd-even geometric " + str(geo.verdict));
    KernelWitnessCert<CountableSpace> cert;
    for (unsigned k = 1; k <= 8; ++k) cert.witnesses.emplace_back(k, make_structured_set({2 * k}));
    t.expect(replay_cert(op, cert), "odd-even chi_{2k} kernel witnesses for k <= 8");
  }
  {
    auto op = entry<IntervalSpace>("line-shift-gap");
    auto h = hypotheses(op);
    auto r = descent_injectivity_bound(op, 10, h);
    t.expect(r.verdict == Verdict::refused("u_bounded_away"), "line shift " + str(r.verdict));
    auto f = indicator<IntervalSpace>(iv("[1,2]"));
    for (unsigned k = 0; k <= 8; ++k) {
      auto cert = range_exclusion(op, f, k);
      auto want = indicator<IntervalSpace>(IntervalUnion::single(Rational(k + 1), Rational(k + 2)));
      t.expect(cert && equal_ae(op.space, cert->g, want) && replay_cert(op, *cert),
               "chi_[k+1,k+2] outside R(W^{k+1}) for k = " + std::to_string(k));
    }
  }
}

void chain_criterion(Tally& t) {
  Gen g(7);
  for (int i = 0; i < 500; ++i) {
    Matrix m = g.matrix(6);
    RankChain c = rank_chain(m);
    bool mono = !c.ranks.empty();
    for (std::size_t k = 1; k < c.ranks.size(); ++k) mono = mono && c.ranks[k] <= c.ranks[k - 1];
    std::size_t stable = rank(power(m, c.stabilization));
    bool permanent = c.verified_permanent && rank(power(m, c.stabilization + 1)) == stable;
    t.expect(mono && permanent, "matrix " + std::to_string(i));
  }
  for (int i = 0; i < 500; ++i) {
    auto op = g.free_instance(6);
    if (g.coin(0.2)) op = op.with_kind(g.coin() ? OperatorKind::Mu : OperatorKind::Ct);
    Matrix m = matrix(op);
    FiniteChainResult r = finite_ascent_descent(op);
    t.expect(kernel_basis_ascent(m) == rank_chain(m).stabilization && r.consistent,
             "operator " + std::to_string(i) + " kernel bases vs ranks");
  }
}

bool report(int n, const std::string& title, const Tally& t, const std::string& extra = "") {
  bool ok = t.failures == 0;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << t.checks - t.failures << "/"
            << t.checks << " checks" << extra << ")" << t.notes.str() << "\n";
  return ok;
}

}  // namespace

int main() {
  bool all = true;
  try {
    Tally c1;
    catalog_criterion(c1);
    all &= report(1, "replication catalog", c1);

    Tally c2;
    Tally c3;
    double elapsed = 0;
    oracle_criteria(c2, c3, elapsed);
    std::ostringstream time;
    time.precision(3);
    time << ", " << elapsed << " s";
    all &= report(2, "measure route equals rank-chain oracle", c2, time.str());
    all &= report(3, "ascent equals descent on finite instances", c3);

    Tally c4;
    norm_criterion(c4);
    all &= report(4, "indicator norms and diagonal quasi-norms", c4);

    Tally c5;
    rearrangement_criterion(c5);
    all &= report(5, "rearrangement properties", c5);

    Tally c6;
    sharpness_criterion(c6);
    all &= report(6, "hypothesis sharpness regressions", c6);

    Tally c7;
    chain_criterion(c7);
    all &= report(7, "rank chain invariants", c7);
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  return all ? 0 : 1;
}
