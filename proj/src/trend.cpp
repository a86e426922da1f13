#include "heatpanel/trend.hpp"

#include <algorithm>
#include <cmath>

#include "heatpanel/error.hpp"

namespace heatpanel {

bool Grouping::is_increasing(const std::string& region) const {
  return std::binary_search(increasing.begin(), increasing.end(), region);
}

TrendEstimate ols_trend(const TimeSeries& series) {
  const std::size_t n = series.values.size();
  if (series.times.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "series '" + series.region + "/" + series.variable +
                                               "' has mismatched time and value counts");
  }
  if (n < 2) {
    throw Error(ErrorCode::TooShort, "series '" + series.region + "/" + series.variable +
                                         "' has fewer than 2 points");
  }

  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += static_cast<double>(series.times[i]);
    y_mean += series.values[i];
  }
  t_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(series.times[i]) - t_mean;
    stt += dt * dt;
    sty += dt * (series.values[i] - y_mean);
  }
  if (stt == 0.0) {
    throw Error(ErrorCode::DegenerateTime, "series '" + series.region + "/" +
                                               series.variable +
                                               "' has all time points identical");
  }
  return {series.region, sty / stt, y_mean, n};
}

std::vector<TrendEstimate> estimate_trends(const StudyPanel& panel, const std::string& target) {
  std::vector<TrendEstimate> trends;
  trends.reserve(panel.region_count());
  for (const auto& region : panel.regions()) {
    trends.push_back(ols_trend(extract_series(panel, region, target)));
  }
  return trends;
}

double median_threshold(const std::vector<TrendEstimate>& trends) {
  if (trends.empty()) throw Error(ErrorCode::EmptyInput, "no trends to take the median of");
  std::vector<double> slopes;
  slopes.reserve(trends.size());
  for (const auto& t : trends) slopes.push_back(t.slope);
  std::sort(slopes.begin(), slopes.end());
  const std::size_t mid = slopes.size() / 2;
  if (slopes.size() % 2 == 1) return slopes[mid];
  return (slopes[mid - 1] + slopes[mid]) / 2.0;
}

Grouping classify_trends(const std::vector<TrendEstimate>& trends, double threshold) {
  Grouping grouping;
  grouping.threshold = threshold;
  for (const auto& t : trends) {
    (t.slope > threshold ? grouping.increasing : grouping.non_increasing).push_back(t.region);
  }
  std::sort(grouping.increasing.begin(), grouping.increasing.end());
  std::sort(grouping.non_increasing.begin(), grouping.non_increasing.end());
  return grouping;
}

}  // namespace heatpanel
