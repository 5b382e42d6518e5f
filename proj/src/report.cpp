#include "lorentz_ops/report.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "lorentz_ops/chains.hpp"
#include "lorentz_ops/criteria.hpp"

namespace lorentz_ops {

using nlohmann::json;

std::string decimal(Real v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

int AnalysisReport::exit_code() const {
  if (disagreement || !mismatches.empty()) return kDisagreement;
  if (analysis_error) return kAnalysis;
  return kOk;
}

namespace {

using Clock = std::chrono::steady_clock;

json tri_json(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json norm_value_json(const NormValue& v) {
  json out{{"diverges", v.diverges}};
  out["value"] = v.diverges ? json("inf") : json(decimal(v.value));
  out["tolerance"] = decimal(v.tolerance, 6);
  out["exact_power"] = v.exact_power ? json(to_string(*v.exact_power)) : json(nullptr);
  return out;
}

enum class Status { Agree, Disagree, NotApplicable };

std::string status_text(Status s) {
  switch (s) {
    case Status::Agree:
      return "agree";
    case Status::Disagree:
      return "disagree";
    case Status::NotApplicable:
      return "n/a";
  }
  return "?";
}

/// Criterion verdict against an exact finite-dimensional chain length.
Status against_exact(const Verdict& v, unsigned truth) {
  switch (v.kind) {
    case VerdictKind::Exact:
      return *v.k == truth ? Status::Agree : Status::Disagree;
    case VerdictKind::AtMost:
      return truth <= *v.k ? Status::Agree : Status::Disagree;
    case VerdictKind::AtLeast:
      return truth >= *v.k ? Status::Agree : Status::Disagree;
    case VerdictKind::InfiniteCertified:
    case VerdictKind::SymbolicInfinite:
      return Status::Disagree;
    default:
      return Status::NotApplicable;
  }
}

/// Ascent verdict against kernel witnesses: a witness at j means ascent > j.
Status against_witnesses(const Verdict& v, const std::vector<unsigned>& ks, unsigned horizon) {
  auto has = [&](unsigned j) { return std::find(ks.begin(), ks.end(), j) != ks.end(); };
  switch (v.kind) {
    case VerdictKind::Exact: {
      for (unsigned j : ks) {
        if (j >= *v.k) return Status::Disagree;
      }
      if (*v.k == 0 || has(*v.k - 1)) return Status::Agree;
      return Status::NotApplicable;
    }
    case VerdictKind::InfiniteCertified: {
      for (unsigned j = 0; j < horizon; ++j) {
        if (!has(j)) return Status::NotApplicable;
      }
      return Status::Agree;
    }
    case VerdictKind::AtLeast:
      return !ks.empty() && ks.back() + 1 >= *v.k ? Status::Agree : Status::NotApplicable;
    default:
      return Status::NotApplicable;
  }
}

class Session {
 public:
  json criteria = json::array();
  json cross = json::array();
  json timings = json::object();
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::string> errors;
  bool disagreement = false;
  bool record_time = true;

  void cross_row(const std::string& what, const std::string& left, const std::string& right, Status s) {
    cross.push_back({{"check", what}, {"criterion", left}, {"oracle", right}, {"status", status_text(s)}});
    if (s == Status::Disagree) disagreement = true;
  }

  void time(const std::string& key, Clock::time_point start) {
    if (!record_time) return;
    timings[key] = decimal(std::chrono::duration<Real, std::milli>(Clock::now() - start).count(), 6);
  }

  /// Runs a checker; engine errors become an error entry.
  template <class S, class Fn>
  std::optional<Verdict> run(const OperatorSpec<S>& op, const HypothesisReport& h, const std::string& key, Fn&& fn) {
    Clock::time_point start = Clock::now();
    try {
      CriterionResult<S> r = fn();
      time(key, start);
      record(op, h, key, r);
      return r.verdict;
    } catch (const std::exception& e) {
      time(key, start);
      criteria.push_back({{"name", key}, {"error", e.what()}});
      errors[key] = e.what();
      return std::nullopt;
    }
  }

  template <class S>
  void record(const OperatorSpec<S>& op, const HypothesisReport& h, const std::string& key,
              const CriterionResult<S>& r) {
    json j = result_json(op, r);
    j["name"] = key;
    for (const auto& c : j["certificates"]) {
      if (!c["replayed"].get<bool>()) {
        cross_row("certificate replay", key, c["kind"].get<std::string>(), Status::Disagree);
      }
    }
    if (r.verdict.is(VerdictKind::Refused) && h.get(r.verdict.hypothesis) != false) {
      cross_row("refusal names a false hypothesis", key, r.verdict.hypothesis, Status::Disagree);
    }
    criteria.push_back(std::move(j));
    verdicts[key] = r.verdict;
  }

  void text_verdict(const std::string& key, const Verdict& v) { verdicts[key] = v; }
};

json boundedness_json(const BoundednessReport& b) {
  return {{"u_ess_bounded", b.u_ess_bounded},
          {"hT_ess_bounded", b.hT_ess_bounded},
          {"eps_sets_invariant", tri_json(b.eps_sets_invariant)},
          {"nonsingular", b.nonsingular},
          {"verdict", to_string(b.verdict)}};
}

json hypotheses_json(const HypothesisReport& h) {
  json out = json::object();
  for (const auto& [name, v] : h.flags()) out[name] = tri_json(v);
  return out;
}

/// Exact ascent/descent of the finite operator, or kernel witnesses found on
/// the generator family for infinite engines.
struct Oracle {
  std::optional<FiniteChainResult> finite;
  std::vector<unsigned> witness_ks;
  unsigned horizon = 0;
};

void compare(Session& s, const std::string& key, const Oracle& o, bool ascent) {
  auto it = s.verdicts.find(key);
  if (it == s.verdicts.end()) return;
  const Verdict& v = it->second;
  if (v.is(VerdictKind::Refused)) {
    s.cross_row(key + (ascent ? " vs oracle ascent" : " vs oracle descent"), to_string(v), "-",
                Status::NotApplicable);
    return;
  }
  if (o.finite) {
    const Verdict& truth = ascent ? o.finite->ascent : o.finite->descent;
    s.cross_row(key + (ascent ? " vs oracle ascent" : " vs oracle descent"), to_string(v), to_string(truth),
                against_exact(v, *truth.k));
  } else if (ascent) {
    std::string ks;
    for (unsigned k : o.witness_ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    s.cross_row(key + " vs kernel witnesses", to_string(v), "witnesses at k in {" + ks + "}",
                against_witnesses(v, o.witness_ks, o.horizon));
  } else {
    s.cross_row(key + " vs oracle descent", to_string(v), "none (infinite engine)", Status::NotApplicable);
  }
}

template <class S>
Oracle build_oracle(Session& s, json& out, const OperatorSpec<S>& op, unsigned horizon, const std::string& prefix) {
  Oracle o;
  o.horizon = horizon;
  Clock::time_point start = Clock::now();
  if constexpr (std::is_same_v<S, FiniteSpace>) {
    FiniteChainResult fr = finite_ascent_descent(op);
    json ranks = json::array();
    for (std::size_t r : fr.chain.ranks) ranks.push_back(r);
    out = {{"kind", "rank_chain"},
           {"ascent", to_string(fr.ascent)},
           {"descent", to_string(fr.descent)},
           {"ranks", ranks},
           {"verified_permanent", fr.chain.verified_permanent},
           {"kernel_basis_ascent", fr.kernel_basis_ascent},
           {"range_descent", fr.range_descent},
           {"consistent", fr.consistent}};
    s.text_verdict(prefix + "oracle_ascent", fr.ascent);
    s.text_verdict(prefix + "oracle_descent", fr.descent);
    s.cross_row(prefix + "rank chain vs kernel bases vs range inclusion", to_string(fr.ascent),
                to_string(fr.descent), fr.consistent ? Status::Agree : Status::Disagree);
    o.finite = fr;
  } else {
    HorizonChainResult<S> hc = horizon_chain(op, horizon);
    json ws = json::array();
    for (const auto& [k, a] : hc.witnesses) {
      ws.push_back({{"k", k}, {"set", describe(op.space, a)}});
      o.witness_ks.push_back(k);
    }
    out = {{"kind", "kernel_witnesses"},
           {"ascent", to_string(hc.ascent)},
           {"annotation", hc.ascent.annotation},
           {"descent", to_string(hc.descent)},
           {"witnesses", ws}};
    s.text_verdict(prefix + "oracle_ascent", hc.ascent);
  }
  s.time(prefix + "oracle", start);
  return o;
}

template <class S>
void run_weighted(Session& s, const OperatorSpec<S>& op, unsigned horizon, const std::string& prefix, bool ascent,
                  bool descent, const Oracle& oracle) {
  HypothesisReport h = hypotheses(op);
  SetFamily<S> fam = SetFamily<S>::build(op, horizon + 1);
  if (ascent) {
    if (!op.hat()) s.run(op, h, prefix + "kernel_identification", [&] { return kernel_identification(op, 1, fam, h); });
    auto rm = s.run(op, h, prefix + "ascent_via_measures", [&] { return ascent_via_measures(op, horizon, fam, h); });
    auto rg = s.run(op, h, prefix + "ascent_geometric", [&] { return ascent_geometric(op, horizon, fam, h); });
    s.run(op, h, prefix + "infinite_ascent_witnesses", [&] { return infinite_ascent_witnesses(op, horizon, fam); });
    if (rm && rg && rm->is(VerdictKind::Exact) && rg->is(VerdictKind::Exact)) {
      s.cross_row(prefix + "geometric route vs measure route", to_string(*rg), to_string(*rm),
                  *rm == *rg ? Status::Agree : Status::Disagree);
    }
    for (const char* k : {"ascent_via_measures", "ascent_geometric", "infinite_ascent_witnesses"}) {
      compare(s, prefix + k, oracle, true);
    }
  }
  if (descent) {
    s.run(op, h, prefix + "descent_injectivity_bound", [&] { return descent_injectivity_bound(op, horizon, h); });
    s.run(op, h, prefix + "infinite_descent_separable",
          [&] { return infinite_descent_separable(op, horizon, fam, h); });
    s.run(op, h, prefix + "infinite_descent_paired", [&] { return infinite_descent_paired(op, horizon, fam, h); });
    for (const char* k : {"descent_injectivity_bound", "infinite_descent_separable", "infinite_descent_paired"}) {
      compare(s, prefix + k, oracle, false);
    }
  }
}

/// The hat analysis: the kernel, measure and geometric routes under the
/// re-indexed N_k, gated on u != 0 a.e.
template <class S>
void run_hat(Session& s, json& out, const OperatorSpec<S>& op, unsigned horizon, const std::string& prefix) {
  OperatorSpec<S> hat = op.with_kind(OperatorKind::WutHat);
  HypothesisReport h = hypotheses(hat);
  Clock::time_point start = Clock::now();
  HatAnalysis<S> ha;
  try {
    ha = hat_operator_analysis(op, horizon);
  } catch (const std::exception& e) {
    s.time(prefix + "hat_operator_analysis", start);
    s.criteria.push_back({{"name", prefix + "hat_operator_analysis"}, {"error", e.what()}});
    s.errors[prefix + "hat_operator_analysis"] = e.what();
    return;
  }
  s.time(prefix + "hat_operator_analysis", start);
  s.record(hat, h, prefix + "hat_operator_analysis", ha.gate);
  for (const auto& r : ha.results) s.record(hat, h, prefix + r.name, r);
  s.run(hat, h, prefix + "infinite_ascent_witnesses", [&] {
    return infinite_ascent_witnesses(hat, horizon, SetFamily<S>::build(hat, horizon + 1));
  });

  json ws = json::array();
  Oracle o;
  o.horizon = horizon;
  for (const auto& [k, a] : ha.oracle.witnesses) {
    ws.push_back({{"k", k}, {"set", describe(op.space, a)}});
    o.witness_ks.push_back(k);
  }
  out = {{"kind", "kernel_witnesses"},
         {"ascent", to_string(ha.oracle.ascent)},
         {"annotation", ha.oracle.ascent.annotation},
         {"witnesses", ws}};
  s.text_verdict(prefix + "hat_oracle_ascent", ha.oracle.ascent);

  if constexpr (std::is_same_v<S, FiniteSpace>) {
    const auto& a = *ha.finite_ascents;
    out["finite_ascents"] = {{"composition", a[0]}, {"weighted", a[1]}, {"weighted_hat", a[2]}};
    FiniteChainResult fr = finite_ascent_descent(hat);
    o.finite = fr;
    if (h.u_nonzero_ae.value_or(false)) {
      bool same = a[0] == a[1] && a[1] == a[2];
      s.cross_row(prefix + "ascent of C_T, W and W hat coincide",
                  std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]), "equal",
                  same ? Status::Agree : Status::Disagree);
    }
  }
  for (const auto& r : ha.results) {
    if (r.name == "kernel_identification") continue;
    compare(s, prefix + r.name, o, true);
  }
  compare(s, prefix + "infinite_ascent_witnesses", o, true);
}

template <class S>
json describe_instance(const OperatorSpec<S>& op) {
  json out{{"operator", to_string(op.kind)}};
  out["map"] = op.kind == OperatorKind::Mu ? json(nullptr) : json(describe(op.space, op.T));
  out["weight"] = op.kind == OperatorKind::Ct ? json(nullptr) : json(describe(op.space, op.u));
  return out;
}

template <class S>
AnalysisReport analyze_op(const InstanceConfig& c, const OperatorSpec<S>& op, unsigned horizon, Real tolerance,
                          bool record_time) {
  Session s;
  s.record_time = record_time;
  json out;
  out["id"] = c.id;
  out["title"] = c.title;
  out["engine"] = Engine<S>::name;
  out["instance"] = describe_instance(op);
  out["horizon"] = horizon;
  out["index"] = c.index ? json(to_string(*c.index)) : json(nullptr);

  Clock::time_point start = Clock::now();
  out["boundedness"] = boundedness_json(boundedness_report(op));
  s.time("boundedness", start);
  HypothesisReport h = hypotheses(op);
  out["hypotheses"] = hypotheses_json(h);

  bool ascent = c.wants("ascent");
  bool descent = c.wants("descent");
  json oracle_json = nullptr;
  json hat_json = nullptr;
  if (op.kind == OperatorKind::Mu) {
    Oracle o;
    if (ascent || descent) o = build_oracle(s, oracle_json, op, horizon, "");
    if (ascent) {
      s.run(op, h, "mult_ascent", [&] { return mult_ascent(op); });
      compare(s, "mult_ascent", o, true);
    }
    if (descent) {
      s.run(op, h, "mult_descent", [&] { return mult_descent(op); });
      if (o.finite) compare(s, "mult_descent", o, false);
    }
  } else if (op.kind == OperatorKind::WutHat) {
    if (ascent) run_hat(s, hat_json, op, horizon, "");
    if (descent) {
      Oracle o;
      o = build_oracle(s, oracle_json, op, horizon, "");
      run_weighted(s, op, horizon, "", false, true, o);
    }
  } else {
    Oracle o;
    if (ascent || descent) o = build_oracle(s, oracle_json, op, horizon, "");
    run_weighted(s, op, horizon, "", ascent, descent, o);
    if (c.wants("hat")) run_hat(s, hat_json, op, horizon, "hat.");
  }
  out["oracle"] = oracle_json;
  out["hat_oracle"] = hat_json;
  out["criteria"] = s.criteria;
  out["cross_check"] = s.cross;

  if (c.wants("norms")) {
    json norms = json::array();
    for (const auto& f : c.functions) {
      start = Clock::now();
      norms.push_back(norms_json(c, f.name, f.text, tolerance));
      s.time("norms." + f.name, start);
    }
    out["norms"] = norms;
  }

  AnalysisReport r;
  json verdicts = json::object();
  for (const auto& [k, v] : s.verdicts) verdicts[k] = to_string(v);
  for (const auto& [k, e] : s.errors) verdicts[k] = "Error(" + e + ")";
  out["verdicts"] = verdicts;
  json expect = json::array();
  for (const auto& [key, want] : c.expect) {
    std::string got = verdicts.value(key, std::string("<absent>"));
    bool match = got == want;
    expect.push_back({{"key", key}, {"expected", want}, {"actual", got}, {"match", match}});
    if (!match) r.mismatches.emplace_back(key, want, got);
  }
  out["expectations"] = expect;
  if (record_time) out["timings_ms"] = s.timings;
  r.disagreement = s.disagreement;
  r.analysis_error = !s.errors.empty();
  out["exit_code"] = r.exit_code();
  r.data = std::move(out);
  return r;
}

}  // namespace

AnalysisReport analyze(const InstanceConfig& c, const RunOptions& opt) {
  unsigned horizon = opt.horizon ? *opt.horizon : effective_horizon(c.horizon);
  Real tol = opt.tolerance ? *opt.tolerance : c.tolerance;
  return std::visit([&](const auto& op) { return analyze_op(c, op, horizon, tol, opt.timings); }, c.instance);
}

std::vector<std::pair<std::string, std::string>> verdict_table(const AnalysisReport& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : r.data["verdicts"].items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

namespace {

std::string flag_text(const json& v) {
  if (v.is_null()) return "unknown";
  return v.get<bool>() ? "yes" : "no";
}

}  // namespace

std::string render_text(const AnalysisReport& r) {
  const json& d = r.data;
  std::ostringstream os;
  os << "instance " << d["id"].get<std::string>();
  if (!d["title"].get<std::string>().empty()) os << ": " << d["title"].get<std::string>();
  os << "\n";
  os << "  engine " << d["engine"].get<std::string>() << ", operator " << d["instance"]["operator"].get<std::string>()
     << ", horizon " << d["horizon"].get<unsigned>() << "\n";
  if (!d["instance"]["map"].is_null()) os << "  T: " << d["instance"]["map"].get<std::string>() << "\n";
  if (!d["instance"]["weight"].is_null()) os << "  u: " << d["instance"]["weight"].get<std::string>() << "\n";
  const json& b = d["boundedness"];
  os << "boundedness: " << b["verdict"].get<std::string>() << " (u in L_inf " << flag_text(b["u_ess_bounded"])
     << ", h_T bounded " << flag_text(b["hT_ess_bounded"]) << ", eps-sets invariant "
     << flag_text(b["eps_sets_invariant"]) << ", nonsingular " << flag_text(b["nonsingular"]) << ")\n";
  os << "hypotheses:\n";
  for (const auto& [k, v] : d["hypotheses"].items()) os << "  " << std::left << std::setw(28) << k << flag_text(v) << "\n";
  if (!d["criteria"].empty()) {
    os << "criteria:\n";
    for (const auto& c : d["criteria"]) {
      os << "  " << std::left << std::setw(34) << c["name"].get<std::string>();
      if (c.contains("error")) {
        os << "error: " << c["error"].get<std::string>() << "\n";
        continue;
      }
      os << c["verdict"]["text"].get<std::string>();
      std::string note = c["verdict"]["annotation"].get<std::string>();
      if (!note.empty()) os << "  [" << note << "]";
      os << "\n";
      for (const auto& cert : c["certificates"]) {
        os << "      certificate " << cert["kind"].get<std::string>() << (cert["replayed"].get<bool>() ? " replayed" : " FAILED replay")
           << "\n";
      }
    }
  }
  if (!d["oracle"].is_null()) {
    os << "oracle: ascent " << d["oracle"]["ascent"].get<std::string>() << ", descent "
       << d["oracle"]["descent"].get<std::string>() << "\n";
  }
  if (!d["hat_oracle"].is_null()) os << "hat oracle: ascent " << d["hat_oracle"]["ascent"].get<std::string>() << "\n";
  if (!d["cross_check"].empty()) {
    os << "cross-check:\n";
    for (const auto& x : d["cross_check"]) {
      os << "  " << std::left << std::setw(9) << x["status"].get<std::string>() << x["check"].get<std::string>() << ": "
         << x["criterion"].get<std::string>() << " / " << x["oracle"].get<std::string>() << "\n";
    }
  }
  if (d.contains("norms")) {
    os << "norms (" << (d["index"].is_null() ? "-" : d["index"].get<std::string>()) << "):\n";
    for (const auto& n : d["norms"]) {
      os << "  " << n["name"].get<std::string>() << ": norm " << n["norm"]["value"].get<std::string>() << ", quasi-norm "
         << n["quasi_norm"]["value"].get<std::string>();
      if (!n["closed_form"].is_null()) os << ", closed form " << n["closed_form"]["value"].get<std::string>();
      os << "\n";
    }
  }
  if (!d["expectations"].empty()) {
    std::size_t bad = r.mismatches.size();
    os << "expectations: " << d["expectations"].size() - bad << "/" << d["expectations"].size() << " matched\n";
    for (const auto& [k, want, got] : r.mismatches) os << "  " << k << ": expected " << want << ", got " << got << "\n";
  }
  os << "exit code " << r.exit_code() << "\n";
  return os.str();
}

json norms_json(const InstanceConfig& c, const std::string& name, const std::string& text,
                std::optional<Real> tolerance) {
  if (!c.index) throw ValidationError("norms need an index (p, q) in the config");
  const LorentzIndex& idx = *c.index;
  Real tol = tolerance ? *tolerance : c.tolerance;
  return std::visit(
      [&](const auto& op) {
        const auto& X = op.space;
        auto f = parse_function(X, text);
        StepFunction hs = rearrangement(profile_of(X, f));
        json out{{"name", name}, {"function", text}, {"index", to_string(idx)}};
        out["norm"] = norm_value_json(norm(hs, idx, tol));
        out["quasi_norm"] = norm_value_json(quasi_norm(hs, idx));
        out["closed_form"] = nullptr;
        bool indicator = f.pieces.size() == 1 && f.pieces[0].first.norm_sq() == 1;
        if (indicator) {
          ExtRational m = measure_of(X, f.pieces[0].second);
          if (m.is_finite()) {
            Real cf = char_norm_closed_form(m, idx);
            out["closed_form"] = {{"value", decimal(cf)}, {"measure", to_string(m)}};
          }
        }
        return out;
      },
      c.instance);
}

}  // namespace lorentz_ops
