#include "heatpanel/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "heatpanel/error.hpp"
#include "heatpanel/report.hpp"

namespace heatpanel {

namespace {

constexpr std::string_view kHeader[] = {"region_id", "year", "variable", "value"};
constexpr std::size_t kMaxListedMissing = 10;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::MalformedCsv,
                "line " + std::to_string(line_no) + ": unterminated quoted field");
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

std::string location(std::string_view region, int year, std::string_view variable) {
  std::ostringstream out;
  out << "(" << region << ", " << year << ", " << variable << ")";
  return out.str();
}

}  // namespace

StudyPanel::StudyPanel(std::vector<std::string> regions, std::vector<int> years,
                       std::vector<std::string> variables, std::vector<double> values)
    : regions_(std::move(regions)),
      years_(std::move(years)),
      variables_(std::move(variables)),
      values_(std::move(values)) {
  if (values_.size() != regions_.size() * years_.size() * variables_.size()) {
    throw Error(ErrorCode::IncompletePanel,
                "value count " + std::to_string(values_.size()) +
                    " does not match shape " + std::to_string(regions_.size()) + " x " +
                    std::to_string(years_.size()) + " x " +
                    std::to_string(variables_.size()));
  }
}

std::optional<std::size_t> StudyPanel::region_index(std::string_view region) const {
  const auto it = std::find(regions_.begin(), regions_.end(), region);
  if (it == regions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - regions_.begin());
}

std::optional<std::size_t> StudyPanel::variable_index(std::string_view variable) const {
  const auto it = std::find(variables_.begin(), variables_.end(), variable);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables_.begin());
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(),
      [](const ValidationIssue& i) { return i.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

StudyPanel parse_panel_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string> regions;
  std::vector<std::string> variables;
  std::unordered_map<std::string, std::size_t> region_ids;
  std::unordered_map<std::string, std::size_t> variable_ids;
  std::set<int> year_set;
  // (region index, year, variable index) -> value
  std::map<std::tuple<std::size_t, int, std::size_t>, double> cells;

  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }

    const auto fields = split_record(line, line_no);
    if (!header_seen) {
      bool ok = fields.size() == 4;
      for (std::size_t i = 0; ok && i < 4; ++i) ok = fields[i] == kHeader[i];
      if (!ok) {
        throw Error(ErrorCode::MalformedCsv,
                    "line " + std::to_string(line_no) +
                        ": header must be exactly 'region_id,year,variable,value'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) +
                                               ": expected 4 fields, got " +
                                               std::to_string(fields.size()));
    }
    const std::string& region = fields[0];
    const std::string& variable = fields[2];
    if (region.empty() || variable.empty()) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(line_no) + ": empty region_id or variable");
    }

    int year = 0;
    {
      const auto& f = fields[1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), year);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) +
                                                 ": year '" + f + "' is not an integer");
      }
    }
    double value = 0.0;
    {
      const auto& f = fields[3];
      const char* first = f.data();
      if (!f.empty() && f.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), value);
      if (ec == std::errc::result_out_of_range) {
        throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line_no) +
                                                   ": value '" + f + "' overflows");
      }
      if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
        throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) +
                                                 ": value '" + f + "' is not numeric");
      }
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "line " + std::to_string(line_no) + ": value " +
                        location(region, year, variable) + " is not finite");
      }
    }

    auto [rit, r_new] = region_ids.try_emplace(region, regions.size());
    if (r_new) regions.push_back(region);
    auto [vit, v_new] = variable_ids.try_emplace(variable, variables.size());
    if (v_new) variables.push_back(variable);
    year_set.insert(year);

    const auto [cell, inserted] = cells.try_emplace({rit->second, year, vit->second}, value);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateCell, "line " + std::to_string(line_no) + ": " +
                                                location(region, year, variable) +
                                                " appears more than once");
    }
  }

  if (!header_seen) throw Error(ErrorCode::MalformedCsv, "missing header row");
  if (cells.empty()) throw Error(ErrorCode::MalformedCsv, "no data rows");

  std::vector<int> years(year_set.begin(), year_set.end());
  std::vector<double> values;
  values.reserve(regions.size() * years.size() * variables.size());
  std::vector<std::string> missing;
  std::size_t missing_count = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (const int year : years) {
      for (std::size_t v = 0; v < variables.size(); ++v) {
        const auto it = cells.find({r, year, v});
        if (it == cells.end()) {
          if (missing.size() < kMaxListedMissing) {
            missing.push_back(location(regions[r], year, variables[v]));
          }
          ++missing_count;
          values.push_back(0.0);
        } else {
          values.push_back(it->second);
        }
      }
    }
  }
  if (missing_count > 0) {
    std::string message = std::to_string(missing_count) + " missing cell(s): ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i > 0) message += ", ";
      message += missing[i];
    }
    if (missing_count > missing.size()) message += ", ...";
    throw Error(ErrorCode::IncompletePanel, message);
  }
  return StudyPanel(std::move(regions), std::move(years), std::move(variables),
                    std::move(values));
}

StudyPanel read_panel_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open panel file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_panel_csv(buffer.str());
}

std::string emit_panel_csv(const StudyPanel& panel) {
  std::string out = "region_id,year,variable,value\n";
  for (std::size_t r = 0; r < panel.region_count(); ++r) {
    for (std::size_t y = 0; y < panel.year_count(); ++y) {
      for (std::size_t v = 0; v < panel.variable_count(); ++v) {
        out += panel.regions()[r];
        out += ',';
        out += std::to_string(panel.years()[y]);
        out += ',';
        out += panel.variables()[v];
        out += ',';
        out += format_double(panel.at(r, y, v));
        out += '\n';
      }
    }
  }
  return out;
}

TimeSeries extract_series(const StudyPanel& panel, std::string_view region,
                          std::string_view variable) {
  const auto r = panel.region_index(region);
  if (!r) throw Error(ErrorCode::UnknownRegion, "unknown region '" + std::string(region) + "'");
  const auto v = panel.variable_index(variable);
  if (!v) {
    throw Error(ErrorCode::UnknownVariable,
                "unknown variable '" + std::string(variable) + "'");
  }
  TimeSeries series{std::string(region), std::string(variable), panel.years(), {}};
  series.values.reserve(panel.year_count());
  for (std::size_t y = 0; y < panel.year_count(); ++y) {
    series.values.push_back(panel.at(*r, y, *v));
  }
  return series;
}

bool is_constant(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(),
                     [&](double x) { return x == values.front(); });
}

ValidationReport validate(const StudyPanel& panel) {
  ValidationReport report;
  auto error = [&](std::string where, std::string what) {
    report.issues.push_back({Severity::Error, std::move(where), std::move(what)});
  };

  if (panel.region_count() == 0 || panel.year_count() == 0 || panel.variable_count() == 0) {
    error("panel", "panel is empty");
  }
  {
    std::set<std::string> seen;
    for (const auto& r : panel.regions()) {
      if (!seen.insert(r).second) error("region " + r, "duplicate region id");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& v : panel.variables()) {
      if (!seen.insert(v).second) error("variable " + v, "duplicate variable name");
    }
  }
  for (std::size_t y = 1; y < panel.year_count(); ++y) {
    if (panel.years()[y] <= panel.years()[y - 1]) {
      error("year " + std::to_string(panel.years()[y]), "years are not strictly increasing");
    }
  }
  if (panel.year_count() == 1) {
    report.issues.push_back(
        {Severity::Warning, "panel", "only one year; trends and correlations are undefined"});
  }

  for (std::size_t r = 0; r < panel.region_count(); ++r) {
    for (std::size_t v = 0; v < panel.variable_count(); ++v) {
      std::vector<double> series;
      bool finite = true;
      for (std::size_t y = 0; y < panel.year_count(); ++y) {
        const double x = panel.at(r, y, v);
        series.push_back(x);
        if (!std::isfinite(x)) {
          finite = false;
          error(location(panel.regions()[r], panel.years()[y], panel.variables()[v]),
                "NonFiniteValue: value is not finite");
        }
      }
      if (finite && series.size() > 1 && is_constant(series)) {
        report.issues.push_back(
            {Severity::Warning,
             "(" + panel.regions()[r] + ", " + panel.variables()[v] + ")",
             "zero-variance series; Pearson correlation is undefined"});
      }
    }
  }
  report.ok = report.error_count() == 0;
  return report;
}

}  // namespace heatpanel
