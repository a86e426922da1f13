#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heatpanel/numerics.hpp"

namespace heatpanel {

using Observation = std::vector<double>;

/// Two groups of p-dimensional observations.
struct GroupedSamples {
  std::vector<Observation> group1;
  std::vector<Observation> group2;
  std::vector<std::string> labels1;  // optional observation ids
  std::vector<std::string> labels2;

  std::size_t dimension() const;
  std::size_t n1() const noexcept { return group1.size(); }
  std::size_t n2() const noexcept { return group2.size(); }

  /// Throws InvalidSamples unless both groups hold >= 2 observations of one
  /// common dimension >= 1.
  void check() const;
};

enum class Verdict { Causal, NotCausal };

std::string_view to_string(Verdict verdict) noexcept;

struct HotellingResult {
  double t2 = 0.0;
  double f_stat = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p_value = 1.0;
  double alpha = 0.01;
  Verdict verdict = Verdict::NotCausal;
  double ridge_lambda = 0.0;
};

struct FTransform {
  double f_stat;
  int df1;
  int df2;
};

struct PermutationEstimate {
  double p_hat = 1.0;
  std::int64_t n_permutations = 0;
  bool exact = false;
  std::uint64_t seed = 0;
};

/// Enumerate every assignment when C(N1 + N2, N1) is at most this many.
inline constexpr std::int64_t kExactEnumerationLimit = 20000;

/// Unbiased pooled covariance [(N1-1) S1 + (N2-1) S2] / (N1 + N2 - 2).
numerics::SpdMatrix pooled_covariance(const GroupedSamples& samples);

/// Two-sample Hotelling T^2 = N1 N2 / (N1 + N2) d' S^-1 d with d = mean1 -
/// mean2. S^-1 d comes from a Cholesky solve. A positive `ridge_lambda` adds
/// ridge_lambda * trace(S) / p to the diagonal of S first.
///
/// Throws SingularCovariance when the pooled covariance has a non-positive
/// pivot.
double hotelling_t2(const GroupedSamples& samples, double ridge_lambda = 0.0);

/// F-transform of T^2: f = T^2 (n - p + 1) / (n p) on (p, n + 1 - p) degrees
/// of freedom, n = N1 + N2 - 2. InsufficientSamples if n + 1 - p < 1.
FTransform t2_to_f(double t2, int n1, int n2, int p);

/// p <= alpha is Causal.
Verdict decide(double p_value, double alpha);

HotellingResult hotelling_test(const GroupedSamples& samples, double alpha,
                               double ridge_lambda = 0.0);

/// Permutation p-value of T^2 under relabelings that keep the group sizes.
///
/// With at most kExactEnumerationLimit assignments all of them are visited
/// and the exact fraction is returned (the seed is ignored). Otherwise
/// `n_permutations` random assignments are drawn and the add-one rule
/// (1 + hits) / (1 + n) applies. Relabelings whose covariance is singular
/// count as hits.
PermutationEstimate permutation_pvalue(const GroupedSamples& samples,
                                       std::int64_t n_permutations, std::uint64_t seed,
                                       double ridge_lambda = 0.0);

/// C(n, k), saturating at INT64_MAX.
std::int64_t binomial(int n, int k);

}  // namespace heatpanel
