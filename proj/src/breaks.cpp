#include "heatpanel/breaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "heatpanel/error.hpp"

namespace heatpanel {

namespace {

// Two-pass sum of squared deviations of an ascending run.
double run_sdcm(const double* first, const double* last) {
  const auto n = static_cast<double>(last - first);
  double sum = 0.0;
  for (const double* it = first; it != last; ++it) sum += *it;
  const double mean = sum / n;
  double ss = 0.0;
  for (const double* it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
  return ss;
}

}  // namespace

double class_sdcm(const std::vector<double>& values, const std::vector<int>& labels, int k) {
  if (values.size() != labels.size()) {
    throw Error(ErrorCode::DomainError, "values and labels differ in length");
  }
  std::vector<std::vector<double>> classes(static_cast<std::size_t>(std::max(k, 0)));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw Error(ErrorCode::DomainError, "label " + std::to_string(labels[i]) + " out of range");
    }
    classes[labels[i]].push_back(values[i]);
  }
  double total = 0.0;
  for (auto& c : classes) {
    if (c.empty()) continue;
    std::sort(c.begin(), c.end());
    total += run_sdcm(c.data(), c.data() + c.size());
  }
  return total;
}

BreaksClassification jenks_breaks(const std::vector<double>& values, int k) {
  if (k < 1) throw Error(ErrorCode::BadK, "k must be >= 1, got " + std::to_string(k));
  for (const double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "breaks input is not finite");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  // Runs of equal values; breaks may only fall between runs.
  std::vector<std::size_t> run_start;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) run_start.push_back(i);
  }
  const std::size_t m = run_start.size();
  const auto classes = static_cast<std::size_t>(k);
  if (m < classes) {
    throw Error(ErrorCode::TooFewDistinct, std::to_string(m) + " distinct value(s) for " +
                                               std::to_string(k) + " classes");
  }
  run_start.push_back(sorted.size());

  // Prefix sums over values shifted by their mean, indexed by run.
  const double shift =
      std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  std::vector<double> count(m + 1, 0.0), sum(m + 1, 0.0), sumsq(m + 1, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    double q = 0.0;
    for (std::size_t i = run_start[r]; i < run_start[r + 1]; ++i) {
      const double x = sorted[i] - shift;
      s += x;
      q += x * x;
    }
    count[r + 1] = count[r] + static_cast<double>(run_start[r + 1] - run_start[r]);
    sum[r + 1] = sum[r] + s;
    sumsq[r + 1] = sumsq[r] + q;
  }
  auto cost = [&](std::size_t first, std::size_t last) {  // runs [first, last]
    const double n = count[last + 1] - count[first];
    const double s = sum[last + 1] - sum[first];
    const double q = sumsq[last + 1] - sumsq[first];
    return std::max(0.0, q - s * s / n);
  };

  // best[c][i]: minimal cost of splitting runs i..m-1 into c + 1 classes;
  // end[c][i]: last run of the first of those classes (leftmost on ties).
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(classes, std::vector<double>(m, kInf));
  std::vector<std::vector<std::size_t>> end(classes, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    best[0][i] = cost(i, m - 1);
    end[0][i] = m - 1;
  }
  for (std::size_t c = 1; c < classes; ++c) {
    for (std::size_t i = 0; i + c < m; ++i) {
      for (std::size_t j = i; j + c < m; ++j) {
        const double candidate = cost(i, j) + best[c - 1][j + 1];
        if (candidate < best[c][i]) {
          best[c][i] = candidate;
          end[c][i] = j;
        }
      }
    }
  }

  BreaksClassification result;
  result.k = k;
  std::vector<std::size_t> class_end_index;  // one past the last sorted index per class
  std::size_t run = 0;
  for (std::size_t c = classes; c-- > 0;) {
    const std::size_t last = end[c][run];
    class_end_index.push_back(run_start[last + 1]);
    run = last + 1;
  }

  std::size_t begin = 0;
  double sdcm = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t stop = class_end_index[c];
    sdcm += run_sdcm(sorted.data() + begin, sorted.data() + stop);
    if (c + 1 < classes) {
      const double lo = sorted[stop - 1];
      const double hi = sorted[stop];
      double mid = lo + (hi - lo) / 2.0;
      if (!(mid < hi)) mid = lo;
      result.boundaries.push_back(mid);
    }
    begin = stop;
  }
  result.sdcm = sdcm;
  result.labels = assign_classes(values, result.boundaries);
  return result;
}

std::vector<int> assign_classes(const std::vector<double>& values,
                                const std::vector<double>& boundaries) {
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (!(boundaries[i - 1] < boundaries[i])) {
      throw Error(ErrorCode::UnsortedBoundaries, "boundaries must be strictly increasing");
    }
  }
  std::vector<int> labels;
  labels.reserve(values.size());
  for (const double v : values) {
    const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), v);
    labels.push_back(static_cast<int>(it - boundaries.begin()));
  }
  return labels;
}

}  // namespace heatpanel
