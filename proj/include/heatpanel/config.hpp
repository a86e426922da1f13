#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "heatpanel/pipeline.hpp"

namespace heatpanel {

/// Applies one `key = value` setting. Keys match the long CLI flags without
/// the leading dashes (panel, target, factors, threshold, alpha, breaks-k,
/// ridge, standardize, perms, seed, out, formats); underscores are accepted
/// in place of dashes. Throws BadConfig on unknown keys or bad values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// Parses a key=value config file body. Blank lines and `#` comments are
/// skipped.
void apply_config_text(PipelineConfig& config, std::string_view text);

/// Loads a config file; a relative `panel` path is resolved against the
/// file's directory.
void apply_config_file(PipelineConfig& config, const std::string& path);

ThresholdPolicy parse_threshold(std::string_view text);
std::vector<OutputFormat> parse_formats(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

std::string_view to_string(OutputFormat format) noexcept;

}  // namespace heatpanel
