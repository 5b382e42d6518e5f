#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lorentz_ops/config.hpp"

namespace lorentz_ops {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kAnalysis = 3, kDisagreement = 4 };

struct RunOptions {
  std::optional<unsigned> horizon;
  std::optional<Real> tolerance;
  /// Record wall-clock timings in the report.
  bool timings = true;
};

struct AnalysisReport {
  nlohmann::json data;
  /// A hypothesis-satisfied criterion contradicted an oracle, or a
  /// certificate failed to replay.
  bool disagreement = false;
  /// A criterion raised an engine error.
  bool analysis_error = false;
  /// key -> (expected, actual) for expectations that did not match.
  std::vector<std::tuple<std::string, std::string, std::string>> mismatches;

  int exit_code() const;
};

AnalysisReport analyze(const InstanceConfig& c, const RunOptions& opt = {});
/// Compact verdict table keyed as in `expect`.
std::vector<std::pair<std::string, std::string>> verdict_table(const AnalysisReport& r);
std::string render_text(const AnalysisReport& r);

/// Norm, quasi-norm and (for indicators) the closed form of one function.
nlohmann::json norms_json(const InstanceConfig& c, const std::string& name, const std::string& function_text,
                          std::optional<Real> tolerance = std::nullopt);

/// Decimal string with `digits` significant digits.
std::string decimal(Real v, int digits = 18);

}  // namespace lorentz_ops
