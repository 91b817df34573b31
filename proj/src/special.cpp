#include "hsb/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hsb/error.hpp"

namespace hsb {
namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
constexpr double kLnSqrtPi = 0.5723649429247000870717137;  // ln(sqrt(pi))

// erf(x) = (2x/sqrt(pi)) e^{-x^2} * S(x^2), S = sum_n (2x^2)^n / (1*3*...*(2n+1)).
// All terms positive, so no cancellation anywhere in [0, 2].
double erf_series_sum(double x2) {
  const double t2 = 2.0 * x2;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 400; ++n) {
    term *= t2 / static_cast<double>(2 * n + 1);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// Laplace continued fraction, x >= 2:
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/K,  K = x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))
// Evaluated with the modified Lentz algorithm; returns K.
double erfc_cf_denominator(double x) {
  const double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n <= 500; ++n) {
    const double a = 0.5 * static_cast<double>(n);
    d = x + a * d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return f;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  double r;
  if (ax <= 2.0) {
    const double x2 = ax * ax;
    r = kTwoOverSqrtPi * ax * std::exp(-x2) * erf_series_sum(x2);
  } else {
    r = 1.0 - erfc(ax);
  }
  return x < 0.0 ? -r : r;  // odd symmetry is exact
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < -2.0) return 2.0 - erfc(-x);
  if (x <= 2.0) return 1.0 - erf(x);
  const double k = erfc_cf_denominator(x);
  return std::exp(-x * x) / k * std::numbers::inv_sqrtpi;
}

double log_erf(double x) {
  if (std::isnan(x) || x < 0.0)
    raise(Errc::invalid_argument, "log_erf requires x >= 0");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x <= 2.0) {
    const double x2 = x * x;
    return std::log(kTwoOverSqrtPi * x) - x2 + std::log(erf_series_sum(x2));
  }
  const double ec = erfc(x);  // < 5e-3; 0.0 once past the underflow point
  return std::log1p(-ec);
}

double log_erfc(double x) {
  if (std::isnan(x) || x < 0.0)
    raise(Errc::invalid_argument, "log_erfc requires x >= 0");
  if (x <= 2.0) return std::log(erfc(x));
  return -x * x - std::log(erfc_cf_denominator(x)) - kLnSqrtPi;
}

}  // namespace hsb
