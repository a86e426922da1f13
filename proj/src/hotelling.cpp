#include "heatpanel/hotelling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <span>

#include "heatpanel/error.hpp"

namespace heatpanel {

namespace {

using numerics::SpdMatrix;

// Relabelings within this relative distance of the observed statistic count
// as ties.
constexpr double kTieTolerance = 1e-10;

std::vector<double> column_means(std::span<const double* const> rows, std::size_t p) {
  std::vector<double> mean(p, 0.0);
  for (const double* row : rows) {
    for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(rows.size());
  return mean;
}

// Adds the upper triangle of sum (x - mean)(x - mean)' to `scatter`.
void accumulate_scatter(std::span<const double* const> rows, const std::vector<double>& mean,
                        SpdMatrix& scatter) {
  const std::size_t p = mean.size();
  std::vector<double> dev(p);
  for (const double* row : rows) {
    for (std::size_t j = 0; j < p; ++j) dev[j] = row[j] - mean[j];
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) scatter(i, j) += dev[i] * dev[j];
    }
  }
}

SpdMatrix pooled_from_rows(std::span<const double* const> g1, std::span<const double* const> g2,
                           const std::vector<double>& mean1, const std::vector<double>& mean2) {
  const std::size_t p = mean1.size();
  SpdMatrix s1(p);
  SpdMatrix s2(p);
  accumulate_scatter(g1, mean1, s1);
  accumulate_scatter(g2, mean2, s2);
  const double dof = static_cast<double>(g1.size() + g2.size() - 2);
  SpdMatrix pooled(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double v = (s1(i, j) + s2(i, j)) / dof;
      pooled(i, j) = v;
      pooled(j, i) = v;
    }
  }
  return pooled;
}

double t2_from_rows(std::span<const double* const> g1, std::span<const double* const> g2,
                    std::size_t p, double ridge_lambda) {
  const auto mean1 = column_means(g1, p);
  const auto mean2 = column_means(g2, p);
  SpdMatrix s = pooled_from_rows(g1, g2, mean1, mean2);
  if (ridge_lambda > 0.0) {
    const double shift = ridge_lambda * s.trace() / static_cast<double>(p);
    for (std::size_t i = 0; i < p; ++i) s(i, i) += shift;
  }

  std::vector<double> diff(p);
  for (std::size_t j = 0; j < p; ++j) diff[j] = mean1[j] - mean2[j];

  std::vector<double> w;
  try {
    w = numerics::solve_spd(s, diff);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(ErrorCode::SingularCovariance,
                "pooled covariance is singular (" + e.detail() +
                    "); use a ridge stabilizer or fewer dimensions");
  }
  double quad = 0.0;
  for (std::size_t j = 0; j < p; ++j) quad += diff[j] * w[j];

  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  return std::max(0.0, n1 * n2 / (n1 + n2) * quad);
}

// Uniform integer in [0, range) by rejection; unlike the standard
// distributions this gives identical draws on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % range;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % range;
}

std::vector<const double*> row_pointers(const std::vector<Observation>& group) {
  std::vector<const double*> rows;
  rows.reserve(group.size());
  for (const auto& obs : group) rows.push_back(obs.data());
  return rows;
}

}  // namespace

std::size_t GroupedSamples::dimension() const {
  if (!group1.empty()) return group1.front().size();
  if (!group2.empty()) return group2.front().size();
  return 0;
}

void GroupedSamples::check() const {
  if (group1.size() < 2 || group2.size() < 2) {
    throw Error(ErrorCode::InvalidSamples,
                "each group needs at least 2 observations (got " + std::to_string(group1.size()) +
                    " and " + std::to_string(group2.size()) + ")");
  }
  const std::size_t p = dimension();
  if (p == 0) throw Error(ErrorCode::InvalidSamples, "observations have dimension 0");
  for (const auto* group : {&group1, &group2}) {
    for (const auto& obs : *group) {
      if (obs.size() != p) {
        throw Error(ErrorCode::InvalidSamples,
                    "observations have mixed dimensions " + std::to_string(p) + " and " +
                        std::to_string(obs.size()));
      }
      for (const double x : obs) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidSamples, "non-finite observation");
      }
    }
  }
  if (!labels1.empty() && labels1.size() != group1.size()) {
    throw Error(ErrorCode::InvalidSamples, "labels1 does not match group1");
  }
  if (!labels2.empty() && labels2.size() != group2.size()) {
    throw Error(ErrorCode::InvalidSamples, "labels2 does not match group2");
  }
}

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::Causal ? "Causal" : "NotCausal";
}

numerics::SpdMatrix pooled_covariance(const GroupedSamples& samples) {
  samples.check();
  const auto g1 = row_pointers(samples.group1);
  const auto g2 = row_pointers(samples.group2);
  const std::size_t p = samples.dimension();
  return pooled_from_rows(g1, g2, column_means(g1, p), column_means(g2, p));
}

double hotelling_t2(const GroupedSamples& samples, double ridge_lambda) {
  samples.check();
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw Error(ErrorCode::DomainError, "ridge lambda must be finite and >= 0");
  }
  const auto g1 = row_pointers(samples.group1);
  const auto g2 = row_pointers(samples.group2);
  return t2_from_rows(g1, g2, samples.dimension(), ridge_lambda);
}

FTransform t2_to_f(double t2, int n1, int n2, int p) {
  if (!(t2 >= 0.0)) {
    throw Error(ErrorCode::DomainError, "T^2 must be >= 0, got " + std::to_string(t2));
  }
  if (p < 1) throw Error(ErrorCode::InsufficientSamples, "dimension must be >= 1");
  const int n = n1 + n2 - 2;
  const int df2 = n + 1 - p;
  if (n < 1 || df2 < 1) {
    throw Error(ErrorCode::InsufficientSamples,
                "N1 + N2 - 1 - p = " + std::to_string(df2) + " < 1 (N1=" + std::to_string(n1) +
                    ", N2=" + std::to_string(n2) + ", p=" + std::to_string(p) + ")");
  }
  const double f = t2 * static_cast<double>(n - p + 1) /
                   (static_cast<double>(n) * static_cast<double>(p));
  return {f, p, df2};
}

Verdict decide(double p_value, double alpha) {
  return p_value <= alpha ? Verdict::Causal : Verdict::NotCausal;
}

HotellingResult hotelling_test(const GroupedSamples& samples, double alpha, double ridge_lambda) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::BadAlpha, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  samples.check();
  const int p = static_cast<int>(samples.dimension());
  const int n1 = static_cast<int>(samples.n1());
  const int n2 = static_cast<int>(samples.n2());
  // Check the degrees of freedom before the solve so an undersized design
  // reports InsufficientSamples rather than a singular matrix.
  t2_to_f(0.0, n1, n2, p);

  HotellingResult result;
  result.t2 = hotelling_t2(samples, ridge_lambda);
  const FTransform f = t2_to_f(result.t2, n1, n2, p);
  result.f_stat = f.f_stat;
  result.df1 = f.df1;
  result.df2 = f.df2;
  result.p_value = numerics::f_sf(f.f_stat, {f.df1, f.df2});
  result.alpha = alpha;
  result.verdict = decide(result.p_value, alpha);
  result.ridge_lambda = ridge_lambda;
  return result;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::int64_t factor = n - k + i;
    if (r > kMax / factor) return kMax;
    r = r * factor / i;
  }
  return r;
}

PermutationEstimate permutation_pvalue(const GroupedSamples& samples,
                                       std::int64_t n_permutations, std::uint64_t seed,
                                       double ridge_lambda) {
  if (n_permutations < 1) {
    throw Error(ErrorCode::DomainError, "n_permutations must be >= 1");
  }
  const double observed = hotelling_t2(samples, ridge_lambda);
  const double cutoff = observed * (1.0 - kTieTolerance);
  const std::size_t p = samples.dimension();
  const int n1 = static_cast<int>(samples.n1());
  const int total = static_cast<int>(samples.n1() + samples.n2());

  std::vector<const double*> pool = row_pointers(samples.group1);
  for (const auto& obs : samples.group2) pool.push_back(obs.data());

  std::vector<const double*> g1(static_cast<std::size_t>(n1));
  std::vector<const double*> g2(static_cast<std::size_t>(total - n1));
  std::vector<char> member(static_cast<std::size_t>(total), 0);

  // Singular relabelings count as reaching the observed statistic.
  auto reaches_observed = [&]() {
    std::size_t a = 0;
    std::size_t b = 0;
    for (int i = 0; i < total; ++i) (member[i] ? g1[a++] : g2[b++]) = pool[i];
    try {
      return t2_from_rows(g1, g2, p, ridge_lambda) >= cutoff;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularCovariance) throw;
      return true;
    }
  };

  PermutationEstimate estimate;
  estimate.seed = seed;
  const std::int64_t assignments = binomial(total, n1);
  if (assignments <= kExactEnumerationLimit) {
    std::vector<int> chosen(static_cast<std::size_t>(n1));
    std::iota(chosen.begin(), chosen.end(), 0);
    std::int64_t hits = 0;
    std::int64_t visited = 0;
    while (true) {
      std::fill(member.begin(), member.end(), 0);
      for (const int c : chosen) member[c] = 1;
      hits += reaches_observed() ? 1 : 0;
      ++visited;
      // next combination in lexicographic order
      int i = n1 - 1;
      while (i >= 0 && chosen[i] == total - n1 + i) --i;
      if (i < 0) break;
      ++chosen[i];
      for (int j = i + 1; j < n1; ++j) chosen[j] = chosen[j - 1] + 1;
    }
    estimate.p_hat = static_cast<double>(hits) / static_cast<double>(visited);
    estimate.n_permutations = visited;
    estimate.exact = true;
    return estimate;
  }

  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(total));
  std::int64_t hits = 0;
  for (std::int64_t draw = 0; draw < n_permutations; ++draw) {
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first n1 slots are a uniform n1-subset.
    for (int i = 0; i < n1; ++i) {
      const auto offset = bounded(rng, static_cast<std::uint64_t>(total - i));
      std::swap(order[i], order[i + static_cast<int>(offset)]);
    }
    std::fill(member.begin(), member.end(), 0);
    for (int i = 0; i < n1; ++i) member[order[i]] = 1;
    hits += reaches_observed() ? 1 : 0;
  }
  estimate.p_hat = static_cast<double>(1 + hits) / static_cast<double>(1 + n_permutations);
  estimate.n_permutations = n_permutations;
  estimate.exact = false;
  return estimate;
}

}  // namespace heatpanel
