#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "heatpanel/panel.hpp"

namespace heatpanel {

/// OLS trend of one region's series. The intercept is the fitted value at
/// the mean year (time is centered before fitting), i.e. the series mean.
struct TrendEstimate {
  std::string region;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;

  friend bool operator==(const TrendEstimate&, const TrendEstimate&) = default;
};

/// Two-way partition of regions. Both lists are sorted, so the result does
/// not depend on the order trends were supplied in.
struct Grouping {
  std::vector<std::string> increasing;
  std::vector<std::string> non_increasing;
  double threshold = 0.0;

  bool is_increasing(const std::string& region) const;
  std::size_t size() const noexcept { return increasing.size() + non_increasing.size(); }
};

TrendEstimate ols_trend(const TimeSeries& series);

/// ols_trend() of `target` for every region, in panel order.
std::vector<TrendEstimate> estimate_trends(const StudyPanel& panel,
                                           const std::string& target);

/// Median of the slopes; mean of the two middle values for even counts.
double median_threshold(const std::vector<TrendEstimate>& trends);

/// A region is increasing iff slope > threshold. Slopes equal to the
/// threshold go to non_increasing.
Grouping classify_trends(const std::vector<TrendEstimate>& trends, double threshold);

}  // namespace heatpanel
