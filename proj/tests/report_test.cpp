#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "lorentz_ops/catalog.hpp"
#include "lorentz_ops/report.hpp"

using namespace lorentz_ops;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

const char* kThreeAtoms = R"(id: three-atoms
engine: finite
operator: weighted
space: {atoms: [a, b, c], weights: ["1", "1", "1"]}
map: {image: [a, a, b]}
weight: {values: ["1", "1", "1"]}
analyze: [ascent, descent, hat]
)";

RunOptions no_timings() {
  RunOptions o;
  o.timings = false;
  return o;
}

std::string verdict(const AnalysisReport& r, const std::string& key) { return r.data["verdicts"].value(key, ""); }

fs::path golden_dir() { return fs::path(LORENTZ_OPS_SOURCE_DIR) / "tests" / "golden"; }

/// Runs the CLI, returning its exit status.
int cli(const std::string& args) {
  std::string cmd = std::string("\"") + LORENTZ_OPS_CLI + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path temp_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Report, ThreeAtomsAscentEqualsDescent) {
  AnalysisReport r = analyze(parse_config(kThreeAtoms), no_timings());
  EXPECT_EQ(verdict(r, "oracle_ascent"), "Exact(2)");
  EXPECT_EQ(verdict(r, "oracle_descent"), "Exact(2)");
  EXPECT_EQ(verdict(r, "ascent_via_measures"), "Exact(2)");
  EXPECT_EQ(verdict(r, "ascent_geometric"), "Exact(2)");
  EXPECT_EQ(verdict(r, "descent_injectivity_bound"), "Exact(2)");
  for (const auto& c : r.data["cross_check"]) EXPECT_NE(c["status"], "disagree") << c["check"];
  EXPECT_EQ(r.exit_code(), kOk);
}

TEST(Report, CatalogMatchesGoldenFiles) {
  bool update = std::getenv("LORENTZ_OPS_UPDATE_GOLDEN") != nullptr;
  for (const auto& e : catalog()) {
    AnalysisReport r = analyze(load_entry(e), no_timings());
    EXPECT_FALSE(r.data.contains("timings_ms"));
    fs::path p = golden_dir() / (e.id + ".json");
    if (update) {
      fs::create_directories(golden_dir());
      std::ofstream(p) << r.data.dump(2) << "\n";
      continue;
    }
    std::ifstream in(p);
    ASSERT_TRUE(in.good()) << p;
    json want = json::parse(in);
    EXPECT_EQ(r.data, want) << e.id;
  }
}

TEST(Report, CatalogExpectationsHold) {
  for (const auto& e : catalog()) {
    AnalysisReport r = analyze(load_entry(e), no_timings());
    EXPECT_EQ(r.exit_code(), kOk) << e.id;
    EXPECT_TRUE(r.mismatches.empty()) << e.id;
    for (const auto& c : r.data["criteria"]) {
      for (const auto& cert : c["certificates"]) EXPECT_TRUE(cert["replayed"].get<bool>()) << e.id << " " << c["name"];
    }
  }
}

TEST(Report, CertificateFieldSetsAreFixed) {
  const std::map<std::string, std::set<std::string>> fields{
      {"MultAscent", {"kind", "value", "zero_set"}},
      {"MultDescentZero", {"kind", "ess_inf_sq"}},
      {"SymbolicDescent", {"kind", "point", "argument"}},
      {"KernelModel", {"kind", "k", "zero_set", "basis_agrees", "separating"}},
      {"MeasureEquivalence", {"kind", "k", "zero_sets"}},
      {"GeometricInclusion", {"kind", "k", "outside", "image"}},
      {"InfiniteAscentWitnesses", {"kind", "sets", "scope"}},
      {"KernelWitnesses", {"kind", "witnesses"}},
      {"InjectiveAEBound", {"kind", "k", "domain", "collisions"}},
      {"RangeExclusion", {"kind", "k", "f", "g", "reason", "evidence", "levels"}},
      {"SeparableDescentWitnesses", {"kind", "items", "scope"}},
      {"PairedDescentWitnesses", {"kind", "items", "scope"}},
  };
  std::set<std::string> seen;
  auto check = [&](const json& data) {
    for (const auto& c : data["criteria"]) {
      for (const auto& cert : c["certificates"]) {
        std::string kind = cert["kind"];
        seen.insert(kind);
        auto it = fields.find(kind);
        ASSERT_NE(it, fields.end()) << kind;
        std::set<std::string> keys;
        for (const auto& [k, v] : cert.items()) keys.insert(k);
        std::set<std::string> want = it->second;
        want.insert("replayed");
        EXPECT_EQ(keys, want) << kind;
      }
    }
  };
  for (const auto& e : catalog()) check(analyze(load_entry(e), no_timings()).data);
  check(analyze(parse_config(kThreeAtoms), no_timings()).data);
  EXPECT_GE(seen.size(), 9u);
}

TEST(Report, MismatchedExpectationExitsFour) {
  InstanceConfig c = load_entry(*find_entry("even-ceiling"));
  c.expect = {{"ascent_via_measures", "Exact(2)"}, {"not_a_criterion", "Exact(0)"}};
  AnalysisReport r = analyze(c, no_timings());
  EXPECT_EQ(r.mismatches.size(), 2u);
  EXPECT_EQ(std::get<2>(r.mismatches[1]), "<absent>");
  EXPECT_EQ(r.exit_code(), kDisagreement);
}

TEST(Report, ExitCodePriority) {
  AnalysisReport r;
  EXPECT_EQ(r.exit_code(), kOk);
  r.analysis_error = true;
  EXPECT_EQ(r.exit_code(), kAnalysis);
  r.disagreement = true;
  EXPECT_EQ(r.exit_code(), kDisagreement);
}

TEST(Report, TextRenderingShowsEveryVerdict) {
  AnalysisReport r = analyze(load_entry(*find_entry("halving-interval")), no_timings());
  std::string text = render_text(r);
  for (const auto& [k, v] : verdict_table(r)) EXPECT_NE(text.find(v), std::string::npos) << k;
  EXPECT_NE(text.find("infinite_ascent_witnesses"), std::string::npos);
}

TEST(Report, NormsOfHalfIndicator) {
  InstanceConfig c = load_entry(*find_entry("mult-linear-weight"));
  json n = norms_json(c, "half", "1@[0,1/2]");
  EXPECT_EQ(n["norm"]["exact_power"], "1");
  EXPECT_NEAR(std::stod(n["norm"]["value"].get<std::string>()), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(n["quasi_norm"]["value"].get<std::string>()), std::sqrt(0.5), 1e-12);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("list"), kOk);
  EXPECT_EQ(cli("replicate even-ceiling"), kOk);
  EXPECT_EQ(cli("replicate no-such-example"), kUsage);
  EXPECT_EQ(cli("frobnicate"), kUsage);
  fs::path bad = temp_file("lorentz_ops_bad.yaml", "id: bad\nengine: finite\noperator: weighted\n"
                                                   "space: {weights: [\"0\"]}\nmap: {image: [\"1\"]}\n"
                                                   "weight: {values: [\"1\"]}\n");
  EXPECT_EQ(cli("analyze \"" + bad.string() + "\""), kValidation);
  fs::path good = temp_file("lorentz_ops_three.yaml", kThreeAtoms);
  EXPECT_EQ(cli("analyze --json \"" + good.string() + "\""), kOk);
  std::string wrong = std::string(kThreeAtoms) + "expect: {oracle_ascent: Exact(1)}\n";
  fs::path mismatch = temp_file("lorentz_ops_mismatch.yaml", wrong);
  EXPECT_EQ(cli("analyze \"" + mismatch.string() + "\""), kDisagreement);
  fs::remove(bad);
  fs::remove(good);
  fs::remove(mismatch);
}
