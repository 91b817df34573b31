#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsb/error.hpp"
#include "hsb/logreal.hpp"

namespace hsb {

struct QuadratureLimits {
  int max_depth = 40;
  int scan_points = 17;  // coarse max-scan used for log-domain rescaling
};

namespace detail {

template <class F>
double simpson_recurse(const F& f, double a, double fa, double m, double fm,
                       double b, double fb, double whole, double tol, int depth,
                       int max_depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    raise(Errc::quadrature_failure, "non-finite integrand value");
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth)
    raise(Errc::quadrature_failure,
          "adaptive Simpson did not reach tolerance within max depth");
  return simpson_recurse(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1,
                         max_depth) +
         simpson_recurse(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1,
                         max_depth);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b]; the reached accuracy is
/// rel_tol relative to the integral, judged by half-step refinement.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol,
                        QuadratureLimits lim = {}) {
  if (a == b) return 0.0;
  const bool flipped = b < a;
  if (flipped) std::swap(a, b);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    raise(Errc::quadrature_failure, "non-finite integrand value");
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::max({std::fabs(whole),
                                 1e-3 * (b - a) *
                                     (std::fabs(fa) + 4.0 * std::fabs(fm) +
                                      std::fabs(fb)) / 6.0,
                                 1e-300});
  const double r = detail::simpson_recurse(f, a, fa, m, fm, b, fb, whole,
                                           rel_tol * scale, 0, lim.max_depth);
  return flipped ? -r : r;
}

/// ln of int_a^b e^{g(z)} dz, computed as a LogReal. The integrand is
/// rescaled by e^{-max g} so arbitrarily large exponents stay finite.
/// Returns exact zero when a == b. Requires a <= b.
template <class G>
LogReal log_domain_integral(const G& g_exponent, double a, double b,
                            double rel_tol, QuadratureLimits lim = {}) {
  if (!(a <= b))
    raise(Errc::invalid_argument, "log_domain_integral requires a <= b");
  if (a == b) return LogReal{};

  auto checked = [&](double z) {
    const double e = g_exponent(z);
    if (!std::isfinite(e))
      raise(Errc::nonfinite_exponent, "non-finite exponent in log-domain integral");
    return e;
  };

  // Coarse scan for the rescaling exponent; a miss only costs a restart.
  double m = -std::numeric_limits<double>::infinity();
  const int k = std::max(lim.scan_points, 3);
  for (int i = 0; i < k; ++i) {
    const double z = a + (b - a) * static_cast<double>(i) / (k - 1);
    m = std::max(m, checked(z));
  }

  for (int attempt = 0; attempt < 8; ++attempt) {
    double seen_max = m;
    bool blew_up = false;
    auto f = [&](double z) {
      const double e = checked(z);
      if (e > seen_max) seen_max = e;
      if (e - m > 500.0) {  // scan missed the peak badly; restart with a better m
        blew_up = true;
        return 0.0;
      }
      return std::exp(e - m);
    };
    double integral;
    try {
      integral = adaptive_simpson(f, a, b, rel_tol, lim);
    } catch (const Error&) {
      if (blew_up) {
        m = seen_max;
        continue;
      }
      throw;
    }
    if (blew_up) {
      m = seen_max;
      continue;
    }
    if (!(integral > 0.0))
      raise(Errc::quadrature_failure, "log-domain integral evaluated to zero");
    return LogReal::from_log(+1, m + std::log(integral));
  }
  raise(Errc::quadrature_failure, "log-domain rescaling failed to settle");
}

}  // namespace hsb
