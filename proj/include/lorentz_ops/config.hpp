#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lorentz_ops/lorentz.hpp"
#include "lorentz_ops/operators.hpp"

namespace lorentz_ops {

struct ConfigIssue {
  /// 1-based; 0 when the issue has no source position.
  int line = 0;
  int column = 0;
  std::string message;
};

std::string to_string(const ConfigIssue& issue);

/// All problems found in one config, syntax or semantic.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

using Instance = std::variant<OperatorSpec<FiniteSpace>, OperatorSpec<CountableSpace>, OperatorSpec<IntervalSpace>>;

/// A named function for the norms request, in the text form read by parse_function.
struct FunctionSpec {
  std::string name;
  std::string text;
  bool operator==(const FunctionSpec&) const = default;
};

struct InstanceConfig {
  std::string id;
  std::string title;
  Instance instance;
  std::optional<LorentzIndex> index;
  unsigned horizon = 10;
  Real tolerance = 1e-12L;
  /// Subset of boundedness, ascent, descent, hat, norms. Boundedness always runs.
  std::vector<std::string> requests{"ascent", "descent"};
  std::vector<FunctionSpec> functions;
  /// Report key -> expected verdict text, e.g. ascent_via_measures -> Exact(1).
  std::vector<std::pair<std::string, std::string>> expect;

  bool operator==(const InstanceConfig&) const = default;
  bool wants(const std::string& request) const;
};

EngineKind engine_of(const InstanceConfig& c);
std::string engine_name(EngineKind k);

/// Throws ConfigError listing every issue found.
InstanceConfig parse_config(const std::string& text);
InstanceConfig load_config(const std::string& path);
std::string serialize(const InstanceConfig& c);

/// Horizon after the LORENTZ_OPS_HORIZON override, if set.
unsigned effective_horizon(unsigned configured);

/// "c@set; c@set", value 1 when "c@" is omitted. Sets: atom names "a,b"
/// (finite); indices and residue tails "3,r%m>F" (countable); interval unions
/// "[0,1/2]|(2,3)" (interval).
SimpleFunction<FiniteSpace> parse_function(const FiniteSpace& X, const std::string& text);
SimpleFunction<CountableSpace> parse_function(const CountableSpace& X, const std::string& text);
SimpleFunction<IntervalSpace> parse_function(const IntervalSpace& X, const std::string& text);

}  // namespace lorentz_ops
