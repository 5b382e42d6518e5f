#include "lorentz_ops/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace lorentz_ops {

std::string to_string(const ConfigIssue& issue) {
  if (issue.line <= 0) return issue.message;
  return "line " + std::to_string(issue.line) + ", column " + std::to_string(issue.column) + ": " + issue.message;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "\n";
    out += to_string(i);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

bool InstanceConfig::wants(const std::string& request) const {
  return std::find(requests.begin(), requests.end(), request) != requests.end();
}

EngineKind engine_of(const InstanceConfig& c) {
  switch (c.instance.index()) {
    case 0:
      return EngineKind::Finite;
    case 1:
      return EngineKind::Countable;
    default:
      return EngineKind::Interval;
  }
}

std::string engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::Finite:
      return "finite";
    case EngineKind::Countable:
      return "countable";
    case EngineKind::Interval:
      return "interval";
  }
  return "?";
}

unsigned effective_horizon(unsigned configured) {
  const char* env = std::getenv("LORENTZ_OPS_HORIZON");
  if (env == nullptr || *env == '\0') return configured;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v > 1000) throw ConfigError({{0, 0, "LORENTZ_OPS_HORIZON must be an integer in 0..1000"}});
  return static_cast<unsigned>(v);
}

namespace {

const std::vector<std::string> kRequests{"boundedness", "ascent", "descent", "hat", "norms"};

/// Collects issues instead of stopping at the first one.
class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void fail(const YAML::Node& at, const std::string& msg) {
    if (at.IsDefined()) {
      issues.push_back({at.Mark().line + 1, at.Mark().column + 1, msg});
    } else {
      issues.push_back({0, 0, msg});
    }
  }

  /// Runs fn; any exception becomes an issue at `at`.
  template <class Fn>
  bool guard(const YAML::Node& at, Fn&& fn) {
    try {
      fn();
      return true;
    } catch (const ConfigError& e) {
      for (const auto& i : e.issues()) issues.push_back(i);
    } catch (const YAML::Exception& e) {
      fail(at, e.msg);
    } catch (const std::exception& e) {
      fail(at, e.what());
    }
    return false;
  }

  YAML::Node need(const YAML::Node& parent, const std::string& key) {
    YAML::Node n = parent[key];
    if (!n.IsDefined()) throw ConfigError({position(parent, "missing key '" + key + "'")});
    return n;
  }

  static ConfigIssue position(const YAML::Node& at, const std::string& msg) {
    if (!at.IsDefined()) return {0, 0, msg};
    return {at.Mark().line + 1, at.Mark().column + 1, msg};
  }
};

std::string scalar(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError({Reader::position(n, "expected a scalar")});
  return n.Scalar();
}

Rational rational_at(const YAML::Node& n) {
  try {
    return parse_rational(scalar(n));
  } catch (const ParseError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

ExtRational ext_at(const YAML::Node& n) {
  try {
    return parse_ext_rational(scalar(n));
  } catch (const ParseError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

ComplexRational complex_at(const YAML::Node& n) {
  try {
    return parse_complex(scalar(n));
  } catch (const ParseError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

Interval interval_at(const YAML::Node& n) {
  try {
    return parse_interval(scalar(n));
  } catch (const std::exception& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

std::uint64_t index_at(const YAML::Node& n) {
  std::string s = scalar(n);
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) {
    throw ConfigError({Reader::position(n, "expected a nonnegative integer, got '" + s + "'")});
  }
  return std::stoull(s);
}

std::vector<YAML::Node> sequence(const YAML::Node& n) {
  if (!n.IsSequence()) throw ConfigError({Reader::position(n, "expected a list")});
  return {n.begin(), n.end()};
}

template <class V, class Fn>
Periodic<V> periodic_at(const YAML::Node& n, Fn&& conv) {
  if (n.IsScalar()) return Periodic<V>(conv(n));
  std::vector<V> head;
  std::vector<V> tail;
  if (n["head"]) {
    for (const auto& x : sequence(n["head"])) head.push_back(conv(x));
  }
  if (!n["tail"]) throw ConfigError({Reader::position(n, "missing key 'tail'")});
  for (const auto& x : sequence(n["tail"])) tail.push_back(conv(x));
  if (tail.empty()) throw ConfigError({Reader::position(n["tail"], "tail must list at least one value")});
  return Periodic<V>(std::move(head), std::move(tail));
}

// ---------------------------------------------------------------------------
// Engines.

FiniteSpace finite_space(Reader& r, const YAML::Node& n) {
  std::vector<Rational> w;
  for (const auto& x : sequence(r.need(n, "weights"))) {
    Rational v = rational_at(x);
    if (sgn(v) <= 0) throw ConfigError({Reader::position(x, "weight must be positive")});
    w.push_back(v);
  }
  std::vector<std::string> names;
  if (n["atoms"]) {
    for (const auto& x : sequence(n["atoms"])) names.push_back(scalar(x));
  } else {
    for (std::size_t i = 1; i <= w.size(); ++i) names.push_back(std::to_string(i));
  }
  return FiniteSpace(names, w);
}

AtomMap finite_map(Reader& r, const FiniteSpace& X, const YAML::Node& n) {
  AtomMap T;
  YAML::Node img = r.need(n, "image");
  for (const auto& x : sequence(img)) {
    try {
      T.image.push_back(X.index_of(scalar(x)));
    } catch (const ValidationError& e) {
      throw ConfigError({Reader::position(x, e.what())});
    }
  }
  try {
    validate(X, T);
  } catch (const ValidationError& e) {
    throw ConfigError({Reader::position(img, e.what())});
  }
  return T;
}

FiniteWeight finite_weight(Reader& r, const FiniteSpace& X, const YAML::Node& n) {
  FiniteWeight u;
  YAML::Node vals = r.need(n, "values");
  for (const auto& x : sequence(vals)) u.values.push_back(complex_at(x));
  try {
    validate(X, u);
  } catch (const ValidationError& e) {
    throw ConfigError({Reader::position(vals, e.what())});
  }
  return u;
}

CountableSpace countable_space(const YAML::Node& n) {
  CountableSpace X;
  if (!n["weights"]) return X;
  YAML::Node w = n["weights"];
  X.weight = periodic_at<Rational>(w, [](const YAML::Node& x) {
    Rational v = rational_at(x);
    if (sgn(v) <= 0) throw ConfigError({Reader::position(x, "weight must be positive")});
    return v;
  });
  return X;
}

TailRule rule_at(const YAML::Node& n) {
  std::string s = scalar(n);
  TailRule rule;
  if (s.size() < 2 || (s[0] != '+' && s[0] != '-' && s[0] != '=')) {
    throw ConfigError({Reader::position(n, "tail rule must read +c, -c or =c, got '" + s + "'")});
  }
  std::string digits = s.substr(1);
  if (!std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw ConfigError({Reader::position(n, "tail rule must read +c, -c or =c, got '" + s + "'")});
  }
  std::int64_t v = std::stoll(digits);
  if (s[0] == '=') {
    rule.kind = TailRule::Kind::Constant;
    rule.value = v;
  } else {
    rule.kind = TailRule::Kind::Shift;
    rule.value = s[0] == '-' ? -v : v;
  }
  return rule;
}

std::string rule_text(const TailRule& rule) {
  if (rule.kind == TailRule::Kind::Constant) return "=" + std::to_string(rule.value);
  return (rule.value < 0 ? "-" : "+") + std::to_string(rule.value < 0 ? -rule.value : rule.value);
}

TailResidueMap countable_map(Reader& r, const CountableSpace& X, const YAML::Node& n) {
  std::map<std::uint64_t, std::uint64_t> head;
  if (n["head"]) {
    std::uint64_t i = 1;
    for (const auto& x : sequence(n["head"])) head[i++] = index_at(x);
  }
  std::vector<TailRule> rules;
  YAML::Node rn = r.need(n, "rules");
  for (const auto& x : sequence(rn)) rules.push_back(rule_at(x));
  try {
    TailResidueMap T(head.size(), head, rules);
    validate(X, T);
    return T;
  } catch (const ValidationError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

CountableWeight countable_weight(const YAML::Node& n) {
  CountableWeight u;
  if (n.IsScalar()) {
    u.offset = Periodic<ComplexRational>(complex_at(n));
    u.slope = Periodic<ComplexRational>(ComplexRational(0));
    return u;
  }
  if (!n["offset"]) throw ConfigError({Reader::position(n, "missing key 'offset'")});
  u.offset = periodic_at<ComplexRational>(n["offset"], complex_at);
  u.slope = n["slope"] ? periodic_at<ComplexRational>(n["slope"], complex_at) : Periodic<ComplexRational>(0);
  return u;
}

IntervalSpace interval_space(Reader& r, const YAML::Node& n) {
  std::vector<Interval> parts;
  for (const auto& x : sequence(r.need(n, "carrier"))) parts.push_back(interval_at(x));
  IntervalUnion carrier(parts);
  if (carrier.empty()) throw ConfigError({Reader::position(n, "carrier must have positive length")});
  std::vector<std::pair<Interval, Rational>> density;
  if (n["density"]) {
    for (const auto& x : sequence(n["density"])) {
      Rational v = rational_at(r.need(x, "value"));
      if (sgn(v) <= 0) throw ConfigError({Reader::position(x, "weight must be positive (density)")});
      density.emplace_back(interval_at(r.need(x, "on")), v);
    }
  }
  try {
    return IntervalSpace(carrier, density);
  } catch (const ValidationError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
}

PiecewiseAffineMap interval_map(Reader& r, const IntervalSpace& X, const YAML::Node& n) {
  PiecewiseAffineMap T;
  for (const auto& x : sequence(r.need(n, "branches"))) {
    T.branches.push_back({interval_at(r.need(x, "on")), rational_at(r.need(x, "slope")),
                          x["intercept"] ? rational_at(x["intercept"]) : Rational(0)});
  }
  try {
    validate(X, T);
  } catch (const ValidationError& e) {
    throw ConfigError({Reader::position(n, e.what())});
  }
  return T;
}

IntervalWeight interval_weight(Reader& r, const YAML::Node& n) {
  IntervalWeight u;
  std::vector<std::pair<Interval, AffinePiece>> items;
  if (n.IsScalar()) {
    u.pieces = PiecewiseFn<AffinePiece>(AffinePiece{complex_at(n), ComplexRational(0)});
    return u;
  }
  for (const auto& x : sequence(r.need(n, "pieces"))) {
    AffinePiece p;
    if (x["value"]) {
      p.alpha = complex_at(x["value"]);
    } else {
      p.alpha = x["alpha"] ? complex_at(x["alpha"]) : ComplexRational(0);
      p.beta = x["beta"] ? complex_at(x["beta"]) : ComplexRational(0);
    }
    items.emplace_back(interval_at(r.need(x, "on")), p);
  }
  u.pieces = PiecewiseFn<AffinePiece>::from_assignments(items, AffinePiece{});
  if (n["null_note"]) u.null_note = scalar(n["null_note"]);
  return u;
}

template <class S, class SpaceFn, class MapFn, class WeightFn>
OperatorSpec<S> build_operator(Reader& r, const YAML::Node& root, OperatorKind kind, SpaceFn&& space_fn,
                               MapFn&& map_fn, WeightFn&& weight_fn) {
  S X = space_fn(r.need(root, "space"));
  OperatorSpec<S> op;
  op.kind = kind;
  op.space = X;
  op.T = identity_map(X);
  op.u = constant_weight(X, ComplexRational(1));
  bool ok = true;
  if (kind != OperatorKind::Mu) {
    ok &= r.guard(root, [&] { op.T = map_fn(X, r.need(root, "map")); });
  }
  if (kind != OperatorKind::Ct) {
    ok &= r.guard(root, [&] { op.u = weight_fn(X, r.need(root, "weight")); });
  }
  if (!ok) throw ConfigError({});
  return op;
}

}  // namespace

InstanceConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, e.mark.column + 1, "syntax error: " + e.msg}});
  }
  if (!root.IsMap()) throw ConfigError({{1, 1, "config must be a mapping"}});

  Reader r;
  InstanceConfig c;
  r.guard(root, [&] { c.id = scalar(r.need(root, "id")); });
  if (root["title"]) r.guard(root["title"], [&] { c.title = scalar(root["title"]); });

  OperatorKind kind = OperatorKind::Wut;
  r.guard(root, [&] {
    YAML::Node n = r.need(root, "operator");
    try {
      kind = parse_operator_kind(scalar(n));
    } catch (const ValidationError& e) {
      throw ConfigError({Reader::position(n, e.what())});
    }
  });

  r.guard(root, [&] {
    YAML::Node en = r.need(root, "engine");
    std::string engine = scalar(en);
    if (engine == "finite") {
      c.instance = build_operator<FiniteSpace>(
          r, root, kind, [&](const YAML::Node& n) { return finite_space(r, n); },
          [&](const FiniteSpace& X, const YAML::Node& n) { return finite_map(r, X, n); },
          [&](const FiniteSpace& X, const YAML::Node& n) { return finite_weight(r, X, n); });
    } else if (engine == "countable") {
      c.instance = build_operator<CountableSpace>(
          r, root, kind, [&](const YAML::Node& n) { return countable_space(n); },
          [&](const CountableSpace& X, const YAML::Node& n) { return countable_map(r, X, n); },
          [&](const CountableSpace&, const YAML::Node& n) { return countable_weight(n); });
    } else if (engine == "interval") {
      c.instance = build_operator<IntervalSpace>(
          r, root, kind, [&](const YAML::Node& n) { return interval_space(r, n); },
          [&](const IntervalSpace& X, const YAML::Node& n) { return interval_map(r, X, n); },
          [&](const IntervalSpace&, const YAML::Node& n) { return interval_weight(r, n); });
    } else {
      throw ConfigError({Reader::position(en, "engine must be finite, countable or interval, got '" + engine + "'")});
    }
  });

  if (root["index"]) {
    YAML::Node n = root["index"];
    r.guard(n, [&] {
      ExtRational p = ext_at(r.need(n, "p"));
      ExtRational q = ext_at(r.need(n, "q"));
      try {
        c.index = LorentzIndex(p, q);
      } catch (const ValidationError& e) {
        throw ConfigError({Reader::position(n, e.what())});
      }
    });
  }
  if (root["horizon"]) {
    r.guard(root["horizon"], [&] {
      std::uint64_t h = index_at(root["horizon"]);
      if (h > 1000) throw ConfigError({Reader::position(root["horizon"], "horizon must not exceed 1000")});
      c.horizon = static_cast<unsigned>(h);
    });
  }
  if (root["tolerance"]) {
    r.guard(root["tolerance"], [&] {
      std::string s = scalar(root["tolerance"]);
      std::size_t used = 0;
      Real t = std::stold(s, &used);
      if (used != s.size() || !(t > 0)) {
        throw ConfigError({Reader::position(root["tolerance"], "tolerance must be a positive number")});
      }
      c.tolerance = t;
    });
  }
  if (root["analyze"]) {
    r.guard(root["analyze"], [&] {
      c.requests.clear();
      for (const auto& x : sequence(root["analyze"])) {
        std::string s = scalar(x);
        if (std::find(kRequests.begin(), kRequests.end(), s) == kRequests.end()) {
          throw ConfigError({Reader::position(x, "unknown analysis request '" + s + "'")});
        }
        c.requests.push_back(s);
      }
    });
  }
  if (root["functions"]) {
    r.guard(root["functions"], [&] {
      for (const auto& x : sequence(root["functions"])) {
        c.functions.push_back({scalar(r.need(x, "name")), scalar(r.need(x, "value"))});
      }
    });
  }
  if (root["expect"]) {
    r.guard(root["expect"], [&] {
      if (!root["expect"].IsMap()) throw ConfigError({Reader::position(root["expect"], "expect must be a mapping")});
      for (const auto& kv : root["expect"]) c.expect.emplace_back(scalar(kv.first), scalar(kv.second));
    });
  }
  if (r.issues.empty() && c.wants("norms") && !c.index) {
    r.fail(root, "the norms request needs an index");
  }
  if (r.issues.empty() && !c.functions.empty()) {
    std::visit(
        [&](const auto& op) {
          for (const auto& f : c.functions) {
            r.guard(root["functions"], [&] { (void)parse_function(op.space, f.text); });
          }
        },
        c.instance);
  }
  if (!r.issues.empty()) throw ConfigError(r.issues);
  return c;
}

InstanceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, 0, "cannot read " + path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

template <class V, class Fn>
void emit_periodic(YAML::Emitter& out, const Periodic<V>& p, Fn&& text) {
  out << YAML::BeginMap;
  out << YAML::Key << "head" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const V& v : p.head()) out << text(v);
  out << YAML::EndSeq;
  out << YAML::Key << "tail" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const V& v : p.tail()) out << text(v);
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

void emit_body(YAML::Emitter& out, const OperatorSpec<FiniteSpace>& op) {
  const FiniteSpace& X = op.space;
  out << YAML::Key << "engine" << YAML::Value << "finite";
  out << YAML::Key << "space" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "atoms" << YAML::Value << YAML::Flow << X.names;
  out << YAML::Key << "weights" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& w : X.weights) out << to_string(w);
  out << YAML::EndSeq << YAML::EndMap;
  if (op.kind != OperatorKind::Mu) {
    out << YAML::Key << "map" << YAML::Value << YAML::BeginMap << YAML::Key << "image" << YAML::Value << YAML::Flow
        << YAML::BeginSeq;
    for (std::size_t y : op.T.image) out << X.names[y];
    out << YAML::EndSeq << YAML::EndMap;
  }
  if (op.kind != OperatorKind::Ct) {
    out << YAML::Key << "weight" << YAML::Value << YAML::BeginMap << YAML::Key << "values" << YAML::Value
        << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : op.u.values) out << to_string(v);
    out << YAML::EndSeq << YAML::EndMap;
  }
}

void emit_body(YAML::Emitter& out, const OperatorSpec<CountableSpace>& op) {
  auto rat = [](const Rational& v) { return to_string(v); };
  auto cpx = [](const ComplexRational& v) { return to_string(v); };
  out << YAML::Key << "engine" << YAML::Value << "countable";
  out << YAML::Key << "space" << YAML::Value << YAML::BeginMap << YAML::Key << "weights" << YAML::Value;
  emit_periodic(out, op.space.weight, rat);
  out << YAML::EndMap;
  if (op.kind != OperatorKind::Mu) {
    out << YAML::Key << "map" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "head" << YAML::Value << YAML::Flow << op.T.head;
    out << YAML::Key << "rules" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& rule : op.T.rules) out << rule_text(rule);
    out << YAML::EndSeq << YAML::EndMap;
  }
  if (op.kind != OperatorKind::Ct) {
    out << YAML::Key << "weight" << YAML::Value << YAML::BeginMap << YAML::Key << "offset" << YAML::Value;
    emit_periodic(out, op.u.offset, cpx);
    out << YAML::Key << "slope" << YAML::Value;
    emit_periodic(out, op.u.slope, cpx);
    out << YAML::EndMap;
  }
}

void emit_body(YAML::Emitter& out, const OperatorSpec<IntervalSpace>& op) {
  const IntervalSpace& X = op.space;
  out << YAML::Key << "engine" << YAML::Value << "interval";
  out << YAML::Key << "space" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "carrier" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const Interval& i : X.carrier.parts()) out << to_string(i);
  out << YAML::EndSeq;
  out << YAML::Key << "density" << YAML::Value << YAML::BeginSeq;
  for (const auto& [span, v] : X.density.restricted(X.carrier)) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "on" << YAML::Value << to_string(span) << YAML::Key
        << "value" << YAML::Value << to_string(v) << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  if (op.kind != OperatorKind::Mu) {
    out << YAML::Key << "map" << YAML::Value << YAML::BeginMap << YAML::Key << "branches" << YAML::Value
        << YAML::BeginSeq;
    for (const auto& b : op.T.branches) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "on" << YAML::Value << to_string(b.domain) << YAML::Key
          << "slope" << YAML::Value << to_string(b.slope) << YAML::Key << "intercept" << YAML::Value
          << to_string(b.intercept) << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }
  if (op.kind != OperatorKind::Ct) {
    out << YAML::Key << "weight" << YAML::Value << YAML::BeginMap << YAML::Key << "pieces" << YAML::Value
        << YAML::BeginSeq;
    for (const auto& p : op.u.pieces.pieces()) {
      if (p.value.is_zero()) continue;
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "on" << YAML::Value << to_string(p.span) << YAML::Key
          << "alpha" << YAML::Value << to_string(p.value.alpha) << YAML::Key << "beta" << YAML::Value
          << to_string(p.value.beta) << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (!op.u.null_note.empty()) out << YAML::Key << "null_note" << YAML::Value << op.u.null_note;
    out << YAML::EndMap;
  }
}

std::string real_text(Real v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << v;
  return os.str();
}

}  // namespace

std::string serialize(const InstanceConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "id" << YAML::Value << c.id;
  if (!c.title.empty()) out << YAML::Key << "title" << YAML::Value << c.title;
  std::visit(
      [&](const auto& op) {
        std::string kind;
        switch (op.kind) {
          case OperatorKind::Mu:
            kind = "multiplication";
            break;
          case OperatorKind::Ct:
            kind = "composition";
            break;
          case OperatorKind::Wut:
            kind = "weighted";
            break;
          case OperatorKind::WutHat:
            kind = "weighted_hat";
            break;
        }
        out << YAML::Key << "operator" << YAML::Value << kind;
        emit_body(out, op);
      },
      c.instance);
  if (c.index) {
    out << YAML::Key << "index" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "p" << YAML::Value
        << to_string(c.index->p()) << YAML::Key << "q" << YAML::Value << to_string(c.index->q()) << YAML::EndMap;
  }
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "tolerance" << YAML::Value << real_text(c.tolerance);
  out << YAML::Key << "analyze" << YAML::Value << YAML::Flow << c.requests;
  if (!c.functions.empty()) {
    out << YAML::Key << "functions" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : c.functions) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << f.name << YAML::Key << "value"
          << YAML::Value << YAML::DoubleQuoted << f.text << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (!c.expect.empty()) {
    out << YAML::Key << "expect" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : c.expect) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Function text.

namespace {

std::string trimmed(std::string s) {
  auto sp = [](unsigned char ch) { return std::isspace(ch) != 0; };
  while (!s.empty() && sp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && sp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trimmed(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trimmed(cur));
  return out;
}

template <class S, class SetFn>
SimpleFunction<S> parse_pieces(const S& X, const std::string& text, SetFn&& set_fn) {
  SimpleFunction<S> f;
  for (const std::string& piece : split_top(text, ';')) {
    if (piece.empty()) continue;
    std::size_t at = piece.find('@');
    ComplexRational c(1);
    std::string set_text = piece;
    if (at != std::string::npos) {
      c = parse_complex(piece.substr(0, at));
      set_text = piece.substr(at + 1);
    }
    f.pieces.emplace_back(c, set_fn(trimmed(set_text)));
  }
  return normalize(X, f);
}

}  // namespace

SimpleFunction<FiniteSpace> parse_function(const FiniteSpace& X, const std::string& text) {
  return parse_pieces(X, text, [&](const std::string& s) {
    std::vector<std::size_t> members;
    for (const std::string& name : split_top(s, ',')) {
      if (!name.empty()) members.push_back(X.index_of(name));
    }
    return make_atom_set(X, members);
  });
}

SimpleFunction<CountableSpace> parse_function(const CountableSpace& X, const std::string& text) {
  return parse_pieces(X, text, [&](const std::string& s) {
    StructuredSet out = empty_set(X);
    for (const std::string& tok : split_top(s, ',')) {
      if (tok.empty()) continue;
      std::size_t pct = tok.find('%');
      std::size_t gt = tok.find('>');
      auto num = [&](const std::string& t) -> std::uint64_t {
        if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit)) {
          throw ValidationError("bad countable set token '" + tok + "'");
        }
        return std::stoull(t);
      };
      if (pct == std::string::npos) {
        std::uint64_t n = num(tok);
        if (n == 0) throw ValidationError("atom indices start at 1");
        out = unite(out, make_structured_set({n}));
      } else {
        if (gt == std::string::npos || gt < pct) throw ValidationError("residue tail must read r%m>F, got '" + tok + "'");
        std::uint64_t r = num(tok.substr(0, pct));
        std::uint64_t m = num(tok.substr(pct + 1, gt - pct - 1));
        std::uint64_t from = num(tok.substr(gt + 1));
        if (m == 0) throw ValidationError("residue modulus must be positive");
        out = unite(out, residue_tail(from, r % m, m));
      }
    }
    return out;
  });
}

SimpleFunction<IntervalSpace> parse_function(const IntervalSpace& X, const std::string& text) {
  return parse_pieces(X, text, [&](const std::string& s) {
    std::vector<Interval> parts;
    for (const std::string& tok : split_top(s, '|')) {
      if (!tok.empty()) parts.push_back(parse_interval(tok));
    }
    return intersect(IntervalUnion(parts), X.carrier);
  });
}

}  // namespace lorentz_ops
