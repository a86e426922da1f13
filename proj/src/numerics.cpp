#include "heatpanel/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "heatpanel/error.hpp"

namespace heatpanel::numerics {

namespace {

// Godfrey's Lanczos coefficients for g = 607/128, n = 15.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};

constexpr int kMaxIterations = 300;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= kEpsilon) return h;
  }
  throw Error(ErrorCode::NoConvergence,
              "incomplete beta continued fraction did not converge for x=" + std::to_string(x) +
                  ", a=" + std::to_string(a) + ", b=" + std::to_string(b));
}

// `y` is 1 - x supplied by the caller so that values of x near 1 keep their
// precision.
BetaTails beta_tails(double x, double y, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DomainError, "incomplete beta needs a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorCode::DomainError,
                "incomplete beta argument " + std::to_string(x) + " outside [0, 1]");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};

  const double log_front =
      ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = std::clamp(front * beta_continued_fraction(x, a, b) / a, 0.0, 1.0);
    return {lower, 1.0 - lower};
  }
  const double upper = std::clamp(front * beta_continued_fraction(y, b, a) / b, 0.0, 1.0);
  return {1.0 - upper, upper};
}

BetaTails f_tails(double x, FParams params) {
  if (params.df1 < 1 || params.df2 < 1) {
    throw Error(ErrorCode::DomainError, "F degrees of freedom must be >= 1");
  }
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::DomainError, "F quantile " + std::to_string(x) + " is negative");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  const double d1 = params.df1;
  const double d2 = params.df2;
  const double denom = d1 * x + d2;
  return beta_tails(d1 * x / denom, d2 / denom, d1 / 2.0, d2 / 2.0);
}

}  // namespace

SpdMatrix::SpdMatrix(std::size_t order, std::vector<double> row_major)
    : order_(order), data_(std::move(row_major)) {
  if (data_.size() != order_ * order_) {
    throw Error(ErrorCode::DomainError, "matrix data does not match order " +
                                            std::to_string(order_));
  }
}

SpdMatrix SpdMatrix::identity(std::size_t order) {
  SpdMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

double SpdMatrix::trace() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < order_; ++i) sum += (*this)(i, i);
  return sum;
}

double SpdMatrix::max_diagonal() const {
  double best = 0.0;
  for (std::size_t i = 0; i < order_; ++i) best = std::max(best, (*this)(i, i));
  return best;
}

double SpdMatrix::asymmetry() const {
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) {
      scale = std::max(scale, std::abs((*this)(i, j)));
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

std::vector<double> solve_spd(const SpdMatrix& s, std::span<const double> v) {
  const std::size_t p = s.order();
  if (v.size() != p) {
    throw Error(ErrorCode::DomainError, "right-hand side has " + std::to_string(v.size()) +
                                            " entries, matrix order is " + std::to_string(p));
  }
  const double floor = kPivotFloor * s.max_diagonal();

  // Lower Cholesky factor, row-major.
  std::vector<double> l(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double pivot = s(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * p + k] * l[j * p + k];
    if (!(pivot > floor) || !(pivot > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " + std::to_string(pivot) +
                      " (floor " + std::to_string(floor) + ")");
    }
    const double ljj = std::sqrt(pivot);
    l[j * p + j] = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double sum = s(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l[i * p + k] * l[j * p + k];
      l[i * p + j] = sum / ljj;
    }
  }

  // L z = v, then L' w = z.
  std::vector<double> w(v.begin(), v.end());
  for (std::size_t i = 0; i < p; ++i) {
    double sum = w[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * p + k] * w[k];
    w[i] = sum / l[i * p + i];
  }
  for (std::size_t i = p; i-- > 0;) {
    double sum = w[i];
    for (std::size_t k = i + 1; k < p; ++k) sum -= l[k * p + i] * w[k];
    w[i] = sum / l[i * p + i];
  }
  return w;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorCode::DomainError, "ln_gamma needs x > 0, got " + std::to_string(x));
  }
  if (std::isinf(x)) return x;
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);

  double sum = kLanczos[0];
  for (std::size_t i = kLanczos.size() - 1; i > 0; --i) {
    sum += kLanczos[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (x + 0.5) * std::log(t) - t + half_log_two_pi + std::log(sum / x);
}

BetaTails incomplete_beta_tails(double x, double a, double b) {
  return beta_tails(x, 1.0 - x, a, b);
}

double reg_incomplete_beta(double x, double a, double b) {
  return incomplete_beta_tails(x, a, b).lower;
}

double f_cdf(double x, FParams params) { return f_tails(x, params).lower; }

double f_sf(double x, FParams params) { return f_tails(x, params).upper; }

}  // namespace heatpanel::numerics
