// heatpanel: command-line driver for the panel trend / correlation / Hotelling
// screening pipeline.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime or
// numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "heatpanel/config.hpp"
#include "heatpanel/error.hpp"
#include "heatpanel/panel.hpp"
#include "heatpanel/pipeline.hpp"
#include "heatpanel/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitRuntime = 2;

// Raw flag values for one subcommand. Only flags the user actually passed
// are applied, on top of the config file.
struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool standardize = false;
  CLI::Option* standardize_flag = nullptr;
};

void add_value(CLI::App* app, Flags& flags, const std::string& name, const std::string& help) {
  flags.options[name] = app->add_option("--" + name, flags.values[name], help);
}

void add_common_options(CLI::App* app, Flags& flags, bool full) {
  app->add_option("--config", flags.config, "key = value config file; flags override it");
  add_value(app, flags, "panel", "panel CSV (region_id,year,variable,value)");
  add_value(app, flags, "target", "target variable (default night_lst)");
  add_value(app, flags, "out", "output directory");
  add_value(app, flags, "formats", "comma list of json,csv,md");
  if (!full) return;
  add_value(app, flags, "factors", "comma-separated factor variables");
  add_value(app, flags, "threshold", "'median' or a fixed trend threshold");
  add_value(app, flags, "alpha", "significance level (default 0.01)");
  add_value(app, flags, "breaks-k", "natural-breaks classes (default 5)");
  add_value(app, flags, "ridge", "ridge stabilizer lambda (default 0)");
  add_value(app, flags, "perms", "permutation-test draws, 0 to skip (default 9999)");
  add_value(app, flags, "seed", "permutation seed (default 42)");
  flags.standardize_flag =
      app->add_flag("--standardize", flags.standardize, "z-score each year across regions");
}

heatpanel::PipelineConfig resolve_config(const Flags& flags) {
  heatpanel::PipelineConfig config;
  if (!flags.config.empty()) heatpanel::apply_config_file(config, flags.config);
  for (const auto& [name, option] : flags.options) {
    if (option->count() > 0) heatpanel::apply_setting(config, name, flags.values.at(name));
  }
  if (flags.standardize_flag != nullptr && flags.standardize_flag->count() > 0) {
    config.standardize = flags.standardize;
  }
  if (config.panel_path.empty()) {
    throw heatpanel::Error(heatpanel::ErrorCode::BadConfig, "no panel given (--panel)");
  }
  return config;
}

void configure_logging() {
  auto logger = spdlog::stderr_logger_st("heatpanel");
  logger->set_pattern("heatpanel [%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("HEATPANEL_LOG")) {
    const std::string name(env);
    if (name == "error") level = spdlog::level::err;
    else if (name == "warn") level = spdlog::level::warn;
    else if (name == "info") level = spdlog::level::info;
    else if (name == "debug") level = spdlog::level::debug;
  }
  spdlog::set_level(level);
}

int run_validate(const Flags& flags) {
  const auto config = resolve_config(flags);
  const auto panel = heatpanel::read_panel_csv(config.panel_path);
  const auto report = heatpanel::validate(panel);
  for (const auto& issue : report.issues) {
    if (issue.severity == heatpanel::Severity::Error) {
      spdlog::error("{}: {}", issue.location, issue.message);
    } else {
      spdlog::warn("{}: {}", issue.location, issue.message);
    }
  }
  spdlog::info("{} regions x {} years x {} variables: {}", panel.region_count(),
               panel.year_count(), panel.variable_count(), report.ok ? "ok" : "invalid");
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    std::ofstream out(std::filesystem::path(config.output_dir) / "validation.json");
    out << heatpanel::validation_to_json(report).dump(2) << "\n";
    if (!out) {
      throw heatpanel::Error(heatpanel::ErrorCode::IoError,
                             "cannot write validation.json in '" + config.output_dir + "'");
    }
  }
  return report.ok ? kExitOk : kExitInput;
}

int run_stage(const Flags& flags, heatpanel::Stage stage) {
  const auto config = resolve_config(flags);
  if (config.output_dir.empty()) {
    throw heatpanel::Error(heatpanel::ErrorCode::BadConfig, "no output directory given (--out)");
  }
  const auto report = heatpanel::run_pipeline(config, stage);
  for (const auto& path : heatpanel::emit_report(report, config.formats, config.output_dir)) {
    spdlog::info("wrote {}", path.string());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Panel trend grouping, correlation screening and Hotelling T-squared tests"};
  app.set_version_flag("--version", std::string(heatpanel::kVersion));
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    bool full;
    heatpanel::Stage stage;
  };
  const Command commands[] = {
      {"validate", "check a panel file", false, heatpanel::Stage::Trends},
      {"trends", "per-region OLS trends of the target", true, heatpanel::Stage::Trends},
      {"classify", "trends plus increasing / non-increasing grouping", true,
       heatpanel::Stage::Classify},
      {"correlate", "per-region Pearson correlation of factors with the target", true,
       heatpanel::Stage::Correlate},
      {"breaks", "correlations plus natural-breaks classes", true, heatpanel::Stage::Breaks},
      {"causal", "grouping plus Hotelling T-squared test per factor", true,
       heatpanel::Stage::Causal},
      {"run", "full pipeline", true, heatpanel::Stage::Full},
  };

  std::map<std::string, std::unique_ptr<Flags>> flags;
  std::map<std::string, CLI::App*> subcommands;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    flags[c.name] = std::make_unique<Flags>();
    add_common_options(sub, *flags[c.name], c.full);
    subcommands[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    for (const auto& c : commands) {
      if (!subcommands[c.name]->parsed()) continue;
      if (std::string_view(c.name) == "validate") return run_validate(*flags[c.name]);
      return run_stage(*flags[c.name], c.stage);
    }
  } catch (const heatpanel::Error& e) {
    spdlog::error("{}", e.what());
    return heatpanel::is_input_error(e.code()) ? kExitInput : kExitRuntime;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return kExitInput;
}
