#include "hsb/pmap.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "hsb/error.hpp"
#include "hsb/quadrature.hpp"

namespace hsb {

struct PIntegralMap::Cache {
  std::map<double, double> values;
  std::mutex mutex;
};

PIntegralMap::PIntegralMap(Expr p_of_y, double eps, double rel_tol)
    : p_(std::move(p_of_y)),
      eps_(eps),
      tol_(rel_tol),
      cache_(std::make_unique<Cache>()) {
  if (!(eps_ > 0.0)) raise(Errc::illegal_sign, "P map requires eps > 0");
  if (!p_.valid()) raise(Errc::invalid_argument, "P map requires a p(y) expression");
}

PIntegralMap::PIntegralMap(PIntegralMap&&) noexcept = default;
PIntegralMap& PIntegralMap::operator=(PIntegralMap&&) noexcept = default;
PIntegralMap::~PIntegralMap() = default;

double PIntegralMap::inner_antiderivative(double z) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(z);
    if (it != cache_->values.end()) return it->second;
  }
  auto integrand = [this](double xi) { return p_.eval1(xi, eps_); };
  const double g = adaptive_simpson(integrand, 0.0, z, tol_ / 10.0);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values.emplace(z, g);
  }
  return g;
}

LogReal PIntegralMap::between(double y0, double y1) const {
  if (y0 == y1) return LogReal{};
  const int sign = y1 > y0 ? +1 : -1;
  const double lo = std::min(y0, y1);
  const double hi = std::max(y0, y1);
  auto g = [this](double z) { return exponent(z); };
  const LogReal mag = log_domain_integral(g, lo, hi, tol_);
  return sign > 0 ? mag : mag.negated();
}

double PIntegralMap::invert(LogReal target, double lo, double hi) const {
  if (!(lo <= hi)) raise(Errc::invalid_argument, "invert needs lo <= hi");
  LogReal p_lo = forward(lo);
  const LogReal p_hi = forward(hi);
  if (lr_cmp(target, p_lo) < 0 || lr_cmp(target, p_hi) > 0) {
    // Admit quadrature-level noise at the bracket ends before giving up.
    auto near = [&](LogReal a, LogReal b) {
      if (a.is_zero() || b.is_zero()) return a.sign() == b.sign();
      return a.sign() == b.sign() &&
             std::fabs(a.logmag() - b.logmag()) < 1e-8 * (1.0 + std::fabs(a.logmag()));
    };
    if (lr_cmp(target, p_lo) < 0 && near(target, p_lo)) return lo;
    if (lr_cmp(target, p_hi) > 0 && near(target, p_hi)) return hi;
    raise(Errc::root_not_bracketed, "P^{-1} target outside bracket");
  }

  double a = lo, b = hi;
  // One incremental integral per step: P(mid) = P(a) + int_a^mid.
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    const double mid = 0.5 * (a + b);
    const LogReal p_mid = lr_add(p_lo, between(a, mid));
    if (lr_cmp(p_mid, target) < 0) {
      a = mid;
      p_lo = p_mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace hsb
