#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heatpanel {

/// Rectangular region x year x variable table of real values.
///
/// Values are stored densely, indexed as ((region * years + year) * variables
/// + variable). The constructor only checks that the value count matches the
/// shape; the remaining invariants (unique keys, increasing years, finite
/// values) are enforced by parse_panel_csv() and reported by validate().
class StudyPanel {
 public:
  StudyPanel() = default;
  StudyPanel(std::vector<std::string> regions, std::vector<int> years,
             std::vector<std::string> variables, std::vector<double> values);

  const std::vector<std::string>& regions() const noexcept { return regions_; }
  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::size_t region_count() const noexcept { return regions_.size(); }
  std::size_t year_count() const noexcept { return years_.size(); }
  std::size_t variable_count() const noexcept { return variables_.size(); }

  std::optional<std::size_t> region_index(std::string_view region) const;
  std::optional<std::size_t> variable_index(std::string_view variable) const;
  bool has_variable(std::string_view variable) const {
    return variable_index(variable).has_value();
  }

  double at(std::size_t region, std::size_t year, std::size_t variable) const {
    return values_[(region * years_.size() + year) * variables_.size() + variable];
  }

  friend bool operator==(const StudyPanel&, const StudyPanel&) = default;

 private:
  std::vector<std::string> regions_;
  std::vector<int> years_;
  std::vector<std::string> variables_;
  std::vector<double> values_;
};

/// One region's annual series of one variable, ordered by year.
struct TimeSeries {
  std::string region;
  std::string variable;
  std::vector<int> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

enum class Severity { Warning, Error };

struct ValidationIssue {
  Severity severity;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  std::size_t error_count() const;
  std::size_t warning_count() const;
};

/// Parses the long-form CSV `region_id,year,variable,value`.
///
/// Regions and variables are ordered by first appearance, years ascending, so
/// the result does not depend on row order. Throws Error with MalformedCsv,
/// DuplicateCell, IncompletePanel or NonFiniteValue.
StudyPanel parse_panel_csv(std::string_view text);

/// Reads a file and forwards to parse_panel_csv(); IoError if unreadable.
StudyPanel read_panel_csv(const std::string& path);

/// Writes the panel in the same schema, rows sorted by (region, year,
/// variable) in panel order, LF line endings, shortest round-trip doubles.
std::string emit_panel_csv(const StudyPanel& panel);

TimeSeries extract_series(const StudyPanel& panel, std::string_view region,
                          std::string_view variable);

ValidationReport validate(const StudyPanel& panel);

/// True if every value equals the first one exactly.
bool is_constant(const std::vector<double>& values);

}  // namespace heatpanel
