#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "lorentz_ops/catalog.hpp"
#include "lorentz_ops/report.hpp"

using namespace lorentz_ops;
using nlohmann::json;

namespace {

int report_config_error(const ConfigError& e) {
  std::cerr << "validation failed:\n";
  for (const auto& i : e.issues()) std::cerr << "  " << to_string(i) << "\n";
  return kValidation;
}

RunOptions run_options(std::optional<unsigned> horizon, std::optional<Real> tolerance) {
  RunOptions o;
  o.horizon = horizon;
  o.tolerance = tolerance;
  return o;
}

int cmd_analyze(const std::string& path, bool as_json, std::optional<unsigned> horizon,
                std::optional<Real> tolerance) {
  InstanceConfig c = load_config(path);
  AnalysisReport r = analyze(c, run_options(horizon, tolerance));
  if (as_json) {
    std::cout << r.data.dump(2) << "\n";
  } else {
    std::cout << render_text(r);
  }
  return r.exit_code();
}

int cmd_replicate(const std::string& id, bool as_json, std::optional<unsigned> horizon) {
  std::vector<const CatalogEntry*> entries;
  if (id == "all") {
    for (const auto& e : catalog()) entries.push_back(&e);
  } else {
    const CatalogEntry* e = find_entry(id);
    if (e == nullptr) {
      std::cerr << "unknown example '" << id << "'; known:";
      for (const auto& x : catalog()) std::cerr << " " << x.id;
      std::cerr << "\n";
      return kUsage;
    }
    entries.push_back(e);
  }
  int worst = kOk;
  json all = json::array();
  for (const CatalogEntry* e : entries) {
    AnalysisReport r = analyze(load_entry(*e), run_options(horizon, std::nullopt));
    worst = std::max(worst, r.exit_code());
    if (as_json) {
      all.push_back(r.data);
      continue;
    }
    if (entries.size() == 1) {
      std::cout << render_text(r);
    } else {
      std::size_t n = r.data["expectations"].size();
      std::cout << (r.exit_code() == kOk ? "PASS " : "FAIL ") << e->id << " (" << n - r.mismatches.size() << "/" << n
                << " expectations)\n";
      for (const auto& [k, want, got] : r.mismatches) {
        std::cout << "  - " << k << ": expected " << want << "\n  + " << k << ": got " << got << "\n";
      }
    }
  }
  if (as_json) std::cout << (entries.size() == 1 ? all[0] : all).dump(2) << "\n";
  return worst;
}

int cmd_norms(const std::string& path, const std::vector<std::string>& functions, bool as_json,
              std::optional<Real> tolerance) {
  InstanceConfig c = load_config(path);
  json out = json::array();
  for (std::size_t i = 0; i < functions.size(); ++i) {
    out.push_back(norms_json(c, "f" + std::to_string(i + 1), functions[i], tolerance));
  }
  if (as_json) {
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  for (const auto& n : out) {
    std::cout << n["function"].get<std::string>() << " in L" << n["index"].get<std::string>() << "\n";
    std::cout << "  norm        " << n["norm"]["value"].get<std::string>() << " (tolerance "
              << n["norm"]["tolerance"].get<std::string>() << ")\n";
    std::cout << "  quasi-norm  " << n["quasi_norm"]["value"].get<std::string>() << "\n";
    if (!n["norm"]["exact_power"].is_null()) {
      std::cout << "  exact q-th power of the norm " << n["norm"]["exact_power"].get<std::string>() << "\n";
    }
    if (!n["closed_form"].is_null()) {
      std::cout << "  closed form " << n["closed_form"]["value"].get<std::string>() << " (measure "
                << n["closed_form"]["measure"].get<std::string>() << ")\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ascent, descent and norms of weighted composition operators on Lorentz spaces"};
  app.require_subcommand(1);

  bool as_json = false;
  std::optional<unsigned> horizon;
  std::optional<Real> tolerance;
  std::string path;
  std::string id;
  std::vector<std::string> functions;

  auto* analyze_cmd = app.add_subcommand("analyze", "Run every applicable criterion on a config");
  analyze_cmd->add_option("config", path, "Instance config (YAML)")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--json", as_json, "Machine-readable report");
  analyze_cmd->add_option("--horizon", horizon, "Largest k examined (overrides config and LORENTZ_OPS_HORIZON)");
  analyze_cmd->add_option("--tolerance", tolerance, "Norm tolerance")->check(CLI::PositiveNumber);

  auto* replicate_cmd = app.add_subcommand("replicate", "Run a shipped example and check its expected verdicts");
  replicate_cmd->add_option("example", id, "Catalog id or 'all'")->required();
  replicate_cmd->add_flag("--json", as_json, "Machine-readable report");
  replicate_cmd->add_option("--horizon", horizon, "Largest k examined");

  auto* norms_cmd = app.add_subcommand("norms", "Lorentz norms of simple functions on a config's space");
  norms_cmd->add_option("config", path, "Instance config (YAML) with an index")->required()->check(CLI::ExistingFile);
  norms_cmd->add_option("--function", functions, "Function text, e.g. '2@[0,1/2];1@(1/2,1]'")->required();
  norms_cmd->add_flag("--json", as_json, "Machine-readable output");
  norms_cmd->add_option("--tolerance", tolerance, "Norm tolerance")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "List the shipped examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("analyze")) return cmd_analyze(path, as_json, horizon, tolerance);
    if (app.got_subcommand("replicate")) return cmd_replicate(id, as_json, horizon);
    if (app.got_subcommand("norms")) return cmd_norms(path, functions, as_json, tolerance);
    for (const auto& e : catalog()) {
      std::cout << e.id << "\t" << load_entry(e).title << "\n";
    }
    return kOk;
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return kAnalysis;
  }
}
