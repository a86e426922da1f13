#pragma once

#include <cstddef>
#include <vector>

namespace heatpanel {

/// Optimal k-class partition of a set of values.
///
/// `boundaries` holds k - 1 strictly increasing cut points placed midway
/// between the largest value of one class and the smallest of the next.
/// `labels[i]` is the class of the i-th input value.
struct BreaksClassification {
  int k = 1;
  std::vector<double> boundaries;
  std::vector<int> labels;
  double sdcm = 0.0;
};

/// Fisher's exact dynamic program for Jenks natural breaks.
///
/// Minimizes the sum of squared deviations from class means over contiguous
/// partitions of the sorted values. Equal values never straddle a break. On
/// exact ties the lexicographically smallest break positions win.
BreaksClassification jenks_breaks(const std::vector<double>& values, int k);

/// Label = number of boundaries strictly below the value.
std::vector<int> assign_classes(const std::vector<double>& values,
                                const std::vector<double>& boundaries);

/// Within-class sum of squared deviations for the given labels, two-pass.
double class_sdcm(const std::vector<double>& values, const std::vector<int>& labels, int k);

}  // namespace heatpanel
