#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatpanel/pipeline.hpp"

namespace heatpanel {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

nlohmann::ordered_json config_to_json(const PipelineConfig& config);
nlohmann::ordered_json report_to_json(const AnalysisReport& report);
nlohmann::ordered_json validation_to_json(const ValidationReport& report);

std::string trends_csv(const std::vector<TrendEstimate>& trends);
std::string grouping_csv(const AnalysisReport& report);
std::string correlations_csv(const CorrelationTable& table);
std::string tests_csv(const std::vector<FactorTest>& tests);
std::string breaks_csv(const AnalysisReport& report);
std::string report_markdown(const AnalysisReport& report);

/// Parses trends.csv back into estimates.
std::vector<TrendEstimate> parse_trends_csv(std::string_view text);

/// Writes the files for the requested formats and the sections present in
/// `report`; returns the paths written. Throws IoError with the path.
std::vector<std::filesystem::path> emit_report(const AnalysisReport& report,
                                               const std::vector<OutputFormat>& formats,
                                               const std::filesystem::path& output_dir);

/// Current time as ISO-8601 UTC, second resolution.
std::string utc_timestamp();

}  // namespace heatpanel
