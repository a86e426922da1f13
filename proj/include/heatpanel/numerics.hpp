#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace heatpanel::numerics {

/// Square symmetric matrix, row-major, expected to be positive definite
/// wherever it is handed to solve_spd().
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {}
  SpdMatrix(std::size_t order, std::vector<double> row_major);

  static SpdMatrix identity(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * order_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  double trace() const;
  double max_diagonal() const;
  /// Largest |a_ij - a_ji| relative to the largest |a_ij|.
  double asymmetry() const;

  friend bool operator==(const SpdMatrix&, const SpdMatrix&) = default;

 private:
  std::size_t order_ = 0;
  std::vector<double> data_;
};

struct FParams {
  int df1 = 1;
  int df2 = 1;
};

/// Pivot floor for the Cholesky factorization, relative to the largest
/// diagonal entry.
inline constexpr double kPivotFloor = 1e-12;

/// Solves S w = v by Cholesky factorization. Throws NotPositiveDefinite with
/// the failing pivot index when a pivot is <= kPivotFloor * max diagonal.
std::vector<double> solve_spd(const SpdMatrix& s, std::span<const double> v);

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128).
double ln_gamma(double x);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double reg_incomplete_beta(double x, double a, double b);

/// I_x(a, b) and 1 - I_x(a, b), with whichever of the two the continued
/// fraction evaluates computed directly and the other by subtraction. The
/// smaller tail is always the direct one.
struct BetaTails {
  double lower;
  double upper;
};
BetaTails incomplete_beta_tails(double x, double a, double b);

double f_cdf(double x, FParams params);

/// Upper tail P(F > x), computed without forming 1 - f_cdf().
double f_sf(double x, FParams params);

}  // namespace heatpanel::numerics
