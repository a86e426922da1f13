#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heatpanel/assoc.hpp"
#include "heatpanel/breaks.hpp"
#include "heatpanel/hotelling.hpp"
#include "heatpanel/panel.hpp"
#include "heatpanel/trend.hpp"

namespace heatpanel {

struct MedianOfTrends {
  friend bool operator==(const MedianOfTrends&, const MedianOfTrends&) = default;
};
struct FixedThreshold {
  double value = 0.0;
  friend bool operator==(const FixedThreshold&, const FixedThreshold&) = default;
};
using ThresholdPolicy = std::variant<MedianOfTrends, FixedThreshold>;

enum class OutputFormat { Json, Csv, Markdown };

struct PipelineConfig {
  std::string panel_path;
  std::string target = "night_lst";
  std::vector<std::string> factors;
  ThresholdPolicy threshold_policy = MedianOfTrends{};
  double alpha = 0.01;
  int breaks_k = 5;
  double ridge_lambda = 0.0;
  bool standardize = false;
  std::int64_t permutations = 9999;  // 0 skips the permutation oracle
  std::uint64_t seed = 42;
  std::string output_dir;
  std::vector<OutputFormat> formats{OutputFormat::Json, OutputFormat::Csv,
                                    OutputFormat::Markdown};
};

/// Which parts of the pipeline a run executes; each CLI subcommand maps to
/// one of these.
enum class Stage { Trends, Classify, Correlate, Breaks, Causal, Full };

/// Throws BadAlpha / BadConfig for inconsistent settings. Factors are only
/// required for stages that use them.
void check_config(const PipelineConfig& config, Stage stage = Stage::Full);

/// Throws UnknownVariable if the target or any factor is missing.
void check_variables(const PipelineConfig& config, const StudyPanel& panel,
                     Stage stage = Stage::Full);

struct FactorTest {
  std::string factor;
  std::size_t n1 = 0;  // increasing group
  std::size_t n2 = 0;  // non-increasing group
  HotellingResult result;
  std::optional<PermutationEstimate> permutation;
};

struct FactorBreaks {
  std::string factor;
  BreaksClassification classes;
};

struct Provenance {
  std::string tool = "heatpanel";
  std::string version;
  std::string timestamp;  // ISO-8601 UTC
  std::string stage;
};

struct AnalysisReport {
  PipelineConfig config;
  Provenance provenance;
  std::vector<std::string> regions;  // panel order
  ValidationReport validation;

  std::vector<TrendEstimate> trends;
  std::optional<double> threshold;
  std::optional<Grouping> grouping;
  std::optional<CorrelationTable> correlations;
  std::vector<FactorBreaks> breaks;
  std::vector<FactorTest> tests;
};

/// Observation vector per region: the region's factor series over all years.
/// With `standardize`, every dimension is z-scored across all regions.
/// Group 1 holds the increasing regions, group 2 the non-increasing ones,
/// both in panel order. DegenerateGrouping if either has fewer than 2.
GroupedSamples build_grouped_samples(const StudyPanel& panel, const Grouping& grouping,
                                     const std::string& factor, bool standardize);

/// Runs the stages for `stage` over an already-parsed panel.
AnalysisReport run_pipeline(const PipelineConfig& config, const StudyPanel& panel,
                            Stage stage = Stage::Full);

/// Reads config.panel_path, validates it, then runs. A panel that fails
/// validation raises the first error-severity issue.
AnalysisReport run_pipeline(const PipelineConfig& config, Stage stage = Stage::Full);

std::string_view to_string(Stage stage) noexcept;

/// Text shown at the top of every Markdown report.
inline constexpr std::string_view kCaveat =
    "Verdicts are mean-difference significance under the trend-grouping "
    "assumption, not confounder-adjusted causation.";

}  // namespace heatpanel
