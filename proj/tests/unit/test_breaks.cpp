#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "breaks_oracle.hpp"
#include "heatpanel/breaks.hpp"
#include "heatpanel/error.hpp"

namespace heatpanel {
namespace {

using heatpanel::testing::brute_force_breaks;
using heatpanel::testing::ndbi_correlations;

// Sorted index at which each class after the first starts.
std::vector<std::size_t> cut_indices(const std::vector<double>& values,
                                     const BreaksClassification& b) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> cuts;
  for (double boundary : b.boundaries) {
    cuts.push_back(static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), boundary) - sorted.begin()));
  }
  return cuts;
}

ErrorCode code_of(const std::vector<double>& values, int k) {
  try {
    jenks_breaks(values, k);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

TEST(Jenks, EveryValueItsOwnClass) {
  const std::vector<double> v{4, 1, 3, 2};
  const auto b = jenks_breaks(v, 4);
  EXPECT_EQ(b.sdcm, 0.0);
  EXPECT_EQ(b.labels, (std::vector<int>{3, 0, 2, 1}));
  EXPECT_EQ(b.boundaries, (std::vector<double>{1.5, 2.5, 3.5}));
}

TEST(Jenks, TwoClusters) {
  const std::vector<double> v{1, 2, 3, 10, 11, 12};
  const auto b = jenks_breaks(v, 2);
  EXPECT_EQ(b.sdcm, 4.0);
  EXPECT_EQ(b.boundaries, (std::vector<double>{6.5}));
  EXPECT_EQ(b.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
}

TEST(Jenks, SingleClass) {
  const auto b = jenks_breaks({1, 2, 3}, 1);
  EXPECT_TRUE(b.boundaries.empty());
  EXPECT_DOUBLE_EQ(b.sdcm, 2.0);
}

TEST(Jenks, Errors) {
  EXPECT_EQ(code_of({1, 2, 3}, 0), ErrorCode::BadK);
  EXPECT_EQ(code_of({1, 1, 2}, 3), ErrorCode::TooFewDistinct);
  EXPECT_EQ(code_of({}, 1), ErrorCode::TooFewDistinct);
  EXPECT_EQ(code_of({1, NAN}, 1), ErrorCode::NonFinite);
}

TEST(Jenks, TiesNeverSplit) {
  const std::vector<double> v{1, 1, 1, 1, 2, 5, 5, 5, 9};
  for (int k = 1; k <= 4; ++k) {
    const auto b = jenks_breaks(v, k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] == v[j]) EXPECT_EQ(b.labels[i], b.labels[j]);
      }
    }
  }
}

TEST(Jenks, LeftmostOnExactTie) {
  // {0},{1,2} and {0,1},{2} both cost 0.5.
  const auto b = jenks_breaks({0, 1, 2}, 2);
  EXPECT_EQ(b.boundaries, (std::vector<double>{0.5}));
}

TEST(Jenks, MatchesExhaustiveSearchOnRandomInstances) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(1, 12);
  std::normal_distribution<double> normal(0.0, 3.0);
  int checked = 0;
  while (checked < 500) {
    const int n = size(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(4, n))(rng);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = normal(rng);
    const auto oracle = brute_force_breaks(v, k);
    const auto b = jenks_breaks(v, k);
    ASSERT_EQ(b.sdcm, oracle.sdcm) << "n=" << n << " k=" << k;
    EXPECT_EQ(cut_indices(v, b), oracle.cuts);
    EXPECT_NEAR(b.sdcm, class_sdcm(v, b.labels, k), 1e-9);
    ++checked;
  }
}

TEST(Jenks, MatchesExhaustiveSearchWithTies) {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + trial % 12);
    for (double& x : v) x = small(rng) * 0.25;
    std::vector<double> distinct = v;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const int k = 1 + trial % std::min<int>(4, static_cast<int>(distinct.size()));
    const auto oracle = brute_force_breaks(v, k);
    const auto b = jenks_breaks(v, k);
    EXPECT_NEAR(b.sdcm, oracle.sdcm, 1e-12);
  }
}

TEST(Jenks, NdbiColumnFiveClasses) {
  const auto& v = ndbi_correlations();
  const auto b = jenks_breaks(v, 5);
  const auto oracle = brute_force_breaks(v, 5);
  EXPECT_EQ(b.sdcm, oracle.sdcm);
  EXPECT_EQ(cut_indices(v, b), oracle.cuts);
  // Frozen from the exhaustive search.
  EXPECT_EQ(oracle.cuts, (std::vector<std::size_t>{4, 9, 12, 14}));
  ASSERT_EQ(b.boundaries.size(), 4u);
  const double expected[] = {0.0645, 0.2115, 0.306, 0.38};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(b.boundaries[i], expected[i], 1e-15);
  EXPECT_NEAR(b.sdcm, 0.01289636666666666, 1e-15);
  EXPECT_EQ(b.labels.size(), v.size());
}

TEST(Jenks, PermutationAndScaleInvariance) {
  std::mt19937_64 rng(107);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(15);
    for (double& x : v) x = normal(rng);
    const auto b = jenks_breaks(v, 4);

    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> shuffled;
    for (auto i : order) shuffled.push_back(v[i]);
    const auto bs = jenks_breaks(shuffled, 4);
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(bs.labels[i], b.labels[order[i]]);

    std::vector<double> scaled;
    for (double x : v) scaled.push_back(2.5 * x + 4.0);
    EXPECT_EQ(jenks_breaks(scaled, 4).labels, b.labels);
  }
}

TEST(Jenks, SdcmNonIncreasingInK) {
  const auto& v = ndbi_correlations();
  double previous = jenks_breaks(v, 1).sdcm;
  for (int k = 2; k <= 10; ++k) {
    const double s = jenks_breaks(v, k).sdcm;
    EXPECT_LE(s, previous);
    previous = s;
  }
}

TEST(AssignClasses, Rules) {
  EXPECT_EQ(assign_classes({-3, 0, 7}, {}), (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(assign_classes({-1, 0, 1}, {0}), (std::vector<int>{0, 0, 1}));
  try {
    assign_classes({1}, {2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsortedBoundaries);
  }
  EXPECT_THROW(assign_classes({1}, {1, 1}), Error);
}

TEST(AssignClasses, RoundTripWithJenks) {
  std::mt19937_64 rng(109);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(20);
    for (double& x : v) x = normal(rng);
    const auto b = jenks_breaks(v, 5);
    EXPECT_EQ(assign_classes(v, b.boundaries), b.labels);
  }
}

}  // namespace
}  // namespace heatpanel
