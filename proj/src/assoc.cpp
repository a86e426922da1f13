#include "heatpanel/assoc.hpp"

#include <algorithm>
#include <cmath>

#include "heatpanel/error.hpp"

namespace heatpanel {

namespace {

constexpr double kClampTolerance = 1e-12;

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double centered_pearson(const std::vector<double>& x, const std::vector<double>& y,
                        const std::string& x_name, const std::string& y_name) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, x_name + " has " + std::to_string(x.size()) +
                                               " points but " + y_name + " has " +
                                               std::to_string(y.size()));
  }
  if (x.size() < 2) throw Error(ErrorCode::TooShort, "correlation needs at least 2 points");
  if (is_constant(x)) throw Error(ErrorCode::ZeroVariance, x_name + " is constant");
  if (is_constant(y)) throw Error(ErrorCode::ZeroVariance, y_name + " is constant");

  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw Error(ErrorCode::ZeroVariance, x_name + " has zero variance");
  if (syy == 0.0) throw Error(ErrorCode::ZeroVariance, y_name + " has zero variance");

  // sqrt(sxx) * sqrt(syy) keeps the product symmetric in (x, y) and avoids
  // overflow of sxx * syy.
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  if (std::abs(r) > 1.0 + kClampTolerance) {
    throw Error(ErrorCode::DomainError, "correlation " + std::to_string(r) + " outside [-1, 1]");
  }
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::vector<double> CorrelationTable::column(std::size_t factor) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.coefficients.at(factor));
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  return centered_pearson(x, y, "x", "y");
}

double pearson(const TimeSeries& x, const TimeSeries& y) {
  const std::string x_name = "series '" + x.region + "/" + x.variable + "'";
  const std::string y_name = "series '" + y.region + "/" + y.variable + "'";
  if (x.size() != y.size() || x.times.size() != y.times.size()) {
    throw Error(ErrorCode::LengthMismatch, x_name + " and " + y_name + " differ in length");
  }
  if (x.times != y.times) {
    throw Error(ErrorCode::TimeMisalignment, x_name + " and " + y_name +
                                                 " are not observed at the same times");
  }
  return centered_pearson(x.values, y.values, x_name, y_name);
}

CorrelationTable correlation_table(const StudyPanel& panel, const std::string& target,
                                   const std::vector<std::string>& factors) {
  if (!panel.has_variable(target)) {
    throw Error(ErrorCode::UnknownVariable, "unknown target variable '" + target + "'");
  }
  for (const auto& f : factors) {
    if (!panel.has_variable(f)) {
      throw Error(ErrorCode::UnknownVariable, "unknown factor '" + f + "'");
    }
  }

  CorrelationTable table{target, factors, {}};
  table.rows.reserve(panel.region_count());
  for (const auto& region : panel.regions()) {
    const TimeSeries y = extract_series(panel, region, target);
    CorrelationRow row{region, {}};
    row.coefficients.reserve(factors.size());
    for (const auto& factor : factors) {
      try {
        row.coefficients.push_back(pearson(extract_series(panel, region, factor), y));
      } catch (const Error& e) {
        throw Error(e.code(), "region '" + region + "', factor '" + factor + "': " + e.detail());
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace heatpanel
