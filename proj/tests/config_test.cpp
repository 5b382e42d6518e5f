#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lorentz_ops/catalog.hpp"
#include "lorentz_ops/report.hpp"

using namespace lorentz_ops;

namespace {

ConfigIssue first_issue(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    EXPECT_FALSE(e.issues().empty());
    return e.issues().front();
  }
  ADD_FAILURE() << "config was accepted";
  return {};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFinite = R"(id: tiny
engine: finite
operator: weighted
space: {atoms: [a, b, c], weights: ["1", "1/2", "3"]}
map: {image: [a, a, b]}
weight: {values: ["1", "2", "0"]}
)";

}  // namespace

TEST(Config, EvenCeilingIsCountable) {
  InstanceConfig c = load_entry(*find_entry("even-ceiling"));
  EXPECT_EQ(engine_of(c), EngineKind::Countable);
  EXPECT_EQ(c.horizon, 10u);
  EXPECT_EQ(c.requests, std::vector<std::string>{"ascent"});
  const auto& op = std::get<OperatorSpec<CountableSpace>>(c.instance);
  EXPECT_EQ(op.kind, OperatorKind::Wut);
  EXPECT_EQ(c.expect.size(), 4u);
}

TEST(Config, FiniteInstance) {
  InstanceConfig c = parse_config(kFinite);
  const auto& op = std::get<OperatorSpec<FiniteSpace>>(c.instance);
  EXPECT_EQ(op.space.size(), 3u);
  EXPECT_EQ(op.T.image, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(op.u.values[1], ComplexRational(2));
}

TEST(Config, NonPositiveWeightIsLocated) {
  std::string yaml = kFinite;
  yaml.replace(yaml.find("\"1/2\""), 5, "\"-1\"");
  ConfigIssue i = first_issue(yaml);
  EXPECT_NE(i.message.find("weight must be positive"), std::string::npos);
  EXPECT_EQ(i.line, 4);
  EXPECT_GT(i.column, 0);
}

TEST(Config, IndexBelowOneIsLocated) {
  ConfigIssue i = first_issue(std::string(kFinite) + "index: {p: \"1\", q: \"2\"}\n");
  EXPECT_NE(i.message.find("p must exceed 1"), std::string::npos);
  EXPECT_EQ(i.line, 7);
}

TEST(Config, SmallQIsRejected) {
  ConfigIssue i = first_issue(std::string(kFinite) + "index: {p: \"2\", q: \"1/2\"}\n");
  EXPECT_NE(i.message.find("q must be at least 1"), std::string::npos);
}

TEST(Config, CollectsSeveralIssues) {
  std::string yaml = std::string(kFinite) + "horizon: 5000\nanalyze: [ascent, nonsense]\n";
  try {
    parse_config(yaml);
    FAIL() << "config was accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.issues().size(), 2u);
  }
}

TEST(Config, UnknownEngine) {
  EXPECT_THROW(parse_config("id: x\nengine: torus\noperator: weighted\nspace: {}\n"), ConfigError);
}

TEST(Config, NormsNeedAnIndex) {
  EXPECT_THROW(parse_config(std::string(kFinite) + "analyze: [norms]\n"), ConfigError);
}

TEST(Config, SerializeRoundTripsCatalog) {
  for (const auto& e : catalog()) {
    InstanceConfig c = load_entry(e);
    InstanceConfig back = parse_config(serialize(c));
    EXPECT_EQ(back, c) << e.id;
  }
}

TEST(Config, SerializeRoundTripsFinite) {
  InstanceConfig c = parse_config(std::string(kFinite) + "index: {p: \"3\", q: \"inf\"}\n");
  EXPECT_EQ(parse_config(serialize(c)), c);
}

TEST(Catalog, MirrorsConfigDirectory) {
  std::filesystem::path dir = std::filesystem::path(LORENTZ_OPS_SOURCE_DIR) / "configs";
  std::size_t files = 0;
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    if (f.path().extension() != ".yaml") continue;
    ++files;
    const CatalogEntry* e = find_entry(f.path().stem().string());
    ASSERT_NE(e, nullptr) << f.path();
    EXPECT_EQ(e->yaml, read_file(f.path()));
    EXPECT_EQ(load_entry(*e).id, e->id);
  }
  EXPECT_EQ(files, catalog().size());
  EXPECT_EQ(find_entry("no-such-example"), nullptr);
}

TEST(Config, EmptyRequestRunsBoundednessOnly) {
  InstanceConfig c = parse_config(std::string(kFinite) + "analyze: []\n");
  EXPECT_TRUE(c.requests.empty());
  AnalysisReport r = analyze(c, RunOptions{std::nullopt, std::nullopt, false});
  EXPECT_TRUE(r.data.contains("boundedness"));
  EXPECT_TRUE(r.data["criteria"].empty());
  EXPECT_EQ(r.exit_code(), kOk);
}

TEST(Config, HorizonEnvironmentOverride) {
  ::setenv("LORENTZ_OPS_HORIZON", "4", 1);
  EXPECT_EQ(effective_horizon(10), 4u);
  ::setenv("LORENTZ_OPS_HORIZON", "x", 1);
  EXPECT_THROW(effective_horizon(10), ConfigError);
  ::unsetenv("LORENTZ_OPS_HORIZON");
  EXPECT_EQ(effective_horizon(10), 10u);
}

TEST(ParseFunction, IntervalSteps) {
  InstanceConfig c = load_entry(*find_entry("mult-linear-weight"));
  const auto& X = std::get<OperatorSpec<IntervalSpace>>(c.instance).space;
  auto f = parse_function(X, "2@[0,1/4];1@(1/4,1]");
  ASSERT_EQ(f.pieces.size(), 2u);
  for (const auto& [c, a] : f.pieces) {
    EXPECT_EQ(measure_of(X, a), c == ComplexRational(2) ? ExtRational(Rational(1, 4)) : ExtRational(Rational(3, 4)));
  }
}

TEST(ParseFunction, CountableResidueTail) {
  CountableSpace X;
  auto f = parse_function(X, "3,0%2>4");
  ASSERT_EQ(f.pieces.size(), 1u);
  EXPECT_TRUE(equal_ae(X, f.pieces[0].second, unite(make_structured_set({3}), residue_tail(4, 0, 2))));
}
