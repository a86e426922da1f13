#pragma once

#include <string>
#include <vector>

#include "heatpanel/panel.hpp"

namespace heatpanel {

struct CorrelationRow {
  std::string region;
  std::vector<double> coefficients;  // one per factor, in factor order
};

/// Per-region Pearson r between each factor and the target series.
struct CorrelationTable {
  std::string target;
  std::vector<std::string> factors;
  std::vector<CorrelationRow> rows;

  /// Coefficients of one factor across all regions, in row order.
  std::vector<double> column(std::size_t factor) const;
};

/// Pearson correlation of two aligned series.
///
/// Uses centered sums and clamps to [-1, 1]. Throws LengthMismatch,
/// TimeMisalignment, TooShort, or ZeroVariance naming the constant input.
double pearson(const TimeSeries& x, const TimeSeries& y);

/// Raw-vector form of pearson() without time alignment checks.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

CorrelationTable correlation_table(const StudyPanel& panel, const std::string& target,
                                   const std::vector<std::string>& factors);

}  // namespace heatpanel
