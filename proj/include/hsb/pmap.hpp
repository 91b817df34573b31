#pragma once

#include <memory>

#include "hsb/expr.hpp"
#include "hsb/logreal.hpp"

namespace hsb {

/// The monotone substitution map
///   P(y) = int_0^y exp(G(z)/eps) dz,   G(z) = int_0^z p(xi) dxi,
/// evaluated entirely in the log domain. P is strictly increasing, P(0) = 0.
///
/// The inner antiderivative G is computed by adaptive quadrature at one
/// tenth of the outer tolerance and cached at quadrature nodes. The cache
/// is mutex-protected so concurrent readers see consistent values.
class PIntegralMap {
 public:
  PIntegralMap(Expr p_of_y, double eps, double rel_tol = 1e-11);
  PIntegralMap(PIntegralMap&&) noexcept;
  PIntegralMap& operator=(PIntegralMap&&) noexcept;
  ~PIntegralMap();

  double eps() const { return eps_; }
  double rel_tol() const { return tol_; }

  /// G(z) = int_0^z p.
  double inner_antiderivative(double z) const;
  /// G(z)/eps, the exponent of the outer integrand.
  double exponent(double z) const { return inner_antiderivative(z) / eps_; }

  /// P(y1) - P(y0), signed, computed directly as one oriented integral
  /// (no cancellation between large P values).
  LogReal between(double y0, double y1) const;

  /// P(y).
  LogReal forward(double y) const { return between(0.0, y); }

  /// Monotone bisection solve of P(y) = target within [lo, hi];
  /// tolerance 1e-12 in y. Targets outside [P(lo), P(hi)] beyond quadrature
  /// noise raise RootNotBracketed.
  double invert(LogReal target, double lo, double hi) const;

 private:
  struct Cache;
  Expr p_;
  double eps_;
  double tol_;
  std::unique_ptr<Cache> cache_;
};

}  // namespace hsb
