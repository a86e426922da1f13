#include "heatpanel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "heatpanel/error.hpp"
#include "heatpanel/report.hpp"

namespace heatpanel {

namespace {

bool uses_trends(Stage s) {
  return s == Stage::Trends || s == Stage::Classify || s == Stage::Causal || s == Stage::Full;
}
bool uses_grouping(Stage s) {
  return s == Stage::Classify || s == Stage::Causal || s == Stage::Full;
}
bool uses_correlations(Stage s) {
  return s == Stage::Correlate || s == Stage::Breaks || s == Stage::Full;
}
bool uses_breaks(Stage s) { return s == Stage::Breaks || s == Stage::Full; }
bool uses_tests(Stage s) { return s == Stage::Causal || s == Stage::Full; }
bool uses_factors(Stage s) { return uses_correlations(s) || uses_tests(s); }

// Runs `body`, prefixing any Error with the stage it came from.
template <typename F>
auto in_stage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + std::string(stage) + "': " + e.detail());
  }
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Trends: return "trends";
    case Stage::Classify: return "classify";
    case Stage::Correlate: return "correlate";
    case Stage::Breaks: return "breaks";
    case Stage::Causal: return "causal";
    case Stage::Full: return "run";
  }
  return "run";
}

void check_config(const PipelineConfig& config, Stage stage) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::BadAlpha,
                "alpha must lie in (0, 1), got " + std::to_string(config.alpha));
  }
  if (config.target.empty()) throw Error(ErrorCode::BadConfig, "target variable is empty");
  if (config.breaks_k < 1) {
    throw Error(ErrorCode::BadConfig, "breaks-k must be >= 1, got " +
                                          std::to_string(config.breaks_k));
  }
  if (!(config.ridge_lambda >= 0.0) || !std::isfinite(config.ridge_lambda)) {
    throw Error(ErrorCode::BadConfig, "ridge must be finite and >= 0");
  }
  if (config.permutations < 0) throw Error(ErrorCode::BadConfig, "perms must be >= 0");
  if (const auto* fixed = std::get_if<FixedThreshold>(&config.threshold_policy);
      fixed && std::isnan(fixed->value)) {
    throw Error(ErrorCode::BadConfig, "threshold is NaN");
  }
  if (uses_factors(stage)) {
    if (config.factors.empty()) throw Error(ErrorCode::BadConfig, "no factors configured");
    std::set<std::string> seen;
    for (const auto& f : config.factors) {
      if (f == config.target) {
        throw Error(ErrorCode::BadConfig, "factor list includes the target '" + f + "'");
      }
      if (!seen.insert(f).second) throw Error(ErrorCode::BadConfig, "duplicate factor '" + f + "'");
    }
  }
}

void check_variables(const PipelineConfig& config, const StudyPanel& panel, Stage stage) {
  if (!panel.has_variable(config.target)) {
    throw Error(ErrorCode::UnknownVariable, "target '" + config.target + "' is not in the panel");
  }
  if (!uses_factors(stage)) return;
  for (const auto& f : config.factors) {
    if (!panel.has_variable(f)) {
      throw Error(ErrorCode::UnknownVariable, "factor '" + f + "' is not in the panel");
    }
  }
}

GroupedSamples build_grouped_samples(const StudyPanel& panel, const Grouping& grouping,
                                     const std::string& factor, bool standardize) {
  const auto v = panel.variable_index(factor);
  if (!v) throw Error(ErrorCode::UnknownVariable, "unknown factor '" + factor + "'");

  GroupedSamples samples;
  for (std::size_t r = 0; r < panel.region_count(); ++r) {
    Observation obs(panel.year_count());
    for (std::size_t y = 0; y < panel.year_count(); ++y) obs[y] = panel.at(r, y, *v);
    const std::string& region = panel.regions()[r];
    if (grouping.is_increasing(region)) {
      samples.group1.push_back(std::move(obs));
      samples.labels1.push_back(region);
    } else {
      samples.group2.push_back(std::move(obs));
      samples.labels2.push_back(region);
    }
  }
  if (samples.n1() + samples.n2() != grouping.size()) {
    throw Error(ErrorCode::DegenerateGrouping, "grouping does not cover the panel's regions");
  }
  if (samples.n1() < 2 || samples.n2() < 2) {
    throw Error(ErrorCode::DegenerateGrouping,
                "groups of size " + std::to_string(samples.n1()) + " (increasing) and " +
                    std::to_string(samples.n2()) + " (non-increasing); both need >= 2");
  }

  if (standardize) {
    const std::size_t p = panel.year_count();
    const double n = static_cast<double>(samples.n1() + samples.n2());
    for (std::size_t d = 0; d < p; ++d) {
      double mean = 0.0;
      for (const auto* g : {&samples.group1, &samples.group2}) {
        for (const auto& obs : *g) mean += obs[d];
      }
      mean /= n;
      double ss = 0.0;
      for (const auto* g : {&samples.group1, &samples.group2}) {
        for (const auto& obs : *g) ss += (obs[d] - mean) * (obs[d] - mean);
      }
      const double sd = std::sqrt(ss / (n - 1.0));
      if (!(sd > 0.0)) {
        throw Error(ErrorCode::ZeroVariance,
                    "factor '" + factor + "' is constant across regions in year " +
                        std::to_string(panel.years()[d]));
      }
      for (auto* g : {&samples.group1, &samples.group2}) {
        for (auto& obs : *g) obs[d] = (obs[d] - mean) / sd;
      }
    }
  }
  return samples;
}

AnalysisReport run_pipeline(const PipelineConfig& config, const StudyPanel& panel, Stage stage) {
  check_config(config, stage);
  check_variables(config, panel, stage);

  AnalysisReport report;
  report.config = config;
  report.provenance.version = std::string(kVersion);
  report.provenance.timestamp = utc_timestamp();
  report.provenance.stage = std::string(to_string(stage));
  report.regions = panel.regions();
  report.validation = validate(panel);
  for (const auto& issue : report.validation.issues) {
    if (issue.severity == Severity::Warning) {
      spdlog::warn("{}: {}", issue.location, issue.message);
    }
  }
  if (!report.validation.ok) {
    const auto& first = *std::find_if(
        report.validation.issues.begin(), report.validation.issues.end(),
        [](const ValidationIssue& i) { return i.severity == Severity::Error; });
    const bool non_finite = first.message.starts_with("NonFiniteValue");
    throw Error(non_finite ? ErrorCode::NonFiniteValue : ErrorCode::IncompletePanel,
                "panel failed validation at " + first.location + ": " + first.message);
  }
  spdlog::info("panel: {} regions x {} years x {} variables", panel.region_count(),
               panel.year_count(), panel.variable_count());

  if (uses_trends(stage)) {
    report.trends = in_stage("trends", [&] { return estimate_trends(panel, config.target); });
    report.threshold = in_stage("trends", [&] {
      if (const auto* fixed = std::get_if<FixedThreshold>(&config.threshold_policy)) {
        return fixed->value;
      }
      return median_threshold(report.trends);
    });
    spdlog::debug("threshold {}", *report.threshold);
  }

  if (uses_grouping(stage)) {
    report.grouping = classify_trends(report.trends, *report.threshold);
    if (report.grouping->size() != panel.region_count()) {
      throw Error(ErrorCode::DegenerateGrouping, "grouping lost regions");
    }
    spdlog::info("grouping: {} increasing, {} non-increasing",
                 report.grouping->increasing.size(), report.grouping->non_increasing.size());
  }

  if (uses_correlations(stage)) {
    report.correlations = in_stage(
        "correlate", [&] { return correlation_table(panel, config.target, config.factors); });
  }

  if (uses_breaks(stage)) {
    for (std::size_t f = 0; f < config.factors.size(); ++f) {
      const auto column = report.correlations->column(f);
      report.breaks.push_back(
          {config.factors[f],
           in_stage("breaks", [&] { return jenks_breaks(column, config.breaks_k); })});
    }
  }

  if (uses_tests(stage)) {
    if (config.ridge_lambda > 0.0) {
      spdlog::warn("ridge stabilizer active: lambda = {}", config.ridge_lambda);
    }
    for (const auto& factor : config.factors) {
      FactorTest test;
      test.factor = factor;
      in_stage("causal", [&] {
        try {
          const GroupedSamples samples =
              build_grouped_samples(panel, *report.grouping, factor, config.standardize);
          test.n1 = samples.n1();
          test.n2 = samples.n2();
          test.result = hotelling_test(samples, config.alpha, config.ridge_lambda);
          if (config.permutations > 0) {
            test.permutation = permutation_pvalue(samples, config.permutations, config.seed,
                                                  config.ridge_lambda);
          }
        } catch (const Error& e) {
          throw Error(e.code(), "factor '" + factor + "': " + e.detail());
        }
      });
      spdlog::info("{}: T2={} F={} p={} -> {}", factor, test.result.t2, test.result.f_stat,
                   test.result.p_value, to_string(test.result.verdict));
      report.tests.push_back(std::move(test));
    }
  }
  return report;
}

AnalysisReport run_pipeline(const PipelineConfig& config, Stage stage) {
  check_config(config, stage);
  const StudyPanel panel = read_panel_csv(config.panel_path);
  return run_pipeline(config, panel, stage);
}

}  // namespace heatpanel
