#include "heatpanel/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "heatpanel/error.hpp"

namespace heatpanel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::BadConfig,
                "bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::BadConfig,
              "bad boolean '" + std::string(text) + "' for " + std::string(key));
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const auto item = trim(text.substr(pos, end - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = end + 1;
  }
  return out;
}

ThresholdPolicy parse_threshold(std::string_view text) {
  text = trim(text);
  if (text == "median") return MedianOfTrends{};
  if (text == "inf" || text == "+inf") {
    return FixedThreshold{std::numeric_limits<double>::infinity()};
  }
  if (text == "-inf") return FixedThreshold{-std::numeric_limits<double>::infinity()};
  const double value = parse_number<double>("threshold", text);
  if (std::isnan(value)) throw Error(ErrorCode::BadConfig, "threshold is NaN");
  return FixedThreshold{value};
}

std::string_view to_string(OutputFormat format) noexcept {
  switch (format) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Markdown: return "md";
  }
  return "json";
}

std::vector<OutputFormat> parse_formats(std::string_view text) {
  std::vector<OutputFormat> formats;
  for (const auto& item : split_list(text)) {
    OutputFormat f;
    if (item == "json") {
      f = OutputFormat::Json;
    } else if (item == "csv") {
      f = OutputFormat::Csv;
    } else if (item == "md" || item == "markdown") {
      f = OutputFormat::Markdown;
    } else {
      throw Error(ErrorCode::BadConfig, "unknown output format '" + item + "'");
    }
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) formats.push_back(f);
  }
  if (formats.empty()) throw Error(ErrorCode::BadConfig, "no output formats given");
  return formats;
}

void apply_setting(PipelineConfig& config, std::string_view raw_key, std::string_view value) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '_', '-');
  value = trim(value);

  if (key == "panel") {
    config.panel_path = std::string(value);
  } else if (key == "target") {
    config.target = std::string(value);
  } else if (key == "factors") {
    config.factors = split_list(value);
  } else if (key == "threshold") {
    config.threshold_policy = parse_threshold(value);
  } else if (key == "alpha") {
    config.alpha = parse_number<double>(key, value);
  } else if (key == "breaks-k") {
    config.breaks_k = parse_number<int>(key, value);
  } else if (key == "ridge") {
    config.ridge_lambda = parse_number<double>(key, value);
  } else if (key == "standardize") {
    config.standardize = parse_bool(key, value);
  } else if (key == "perms") {
    config.permutations = parse_number<std::int64_t>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    config.output_dir = std::string(value);
  } else if (key == "formats") {
    config.formats = parse_formats(value);
  } else {
    throw Error(ErrorCode::BadConfig, "unknown config key '" + std::string(raw_key) + "'");
  }
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::BadConfig,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    auto v = trim(line.substr(eq + 1));
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    apply_setting(config, line.substr(0, eq), v);
  }
}

void apply_config_file(PipelineConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string previous_panel = config.panel_path;
  apply_config_text(config, buffer.str());
  if (config.panel_path != previous_panel && !config.panel_path.empty()) {
    const std::filesystem::path panel(config.panel_path);
    if (panel.is_relative()) {
      config.panel_path = (std::filesystem::path(path).parent_path() / panel).string();
    }
  }
}

}  // namespace heatpanel
