#pragma once

namespace hsb {

/// Error function, absolute error <= 1e-14 on the whole real line.
/// Taylor-type series for |x| <= 2, Laplace continued fraction beyond.
double erf(double x);

/// Complementary error function with full relative accuracy for x > 2.
double erfc(double x);

/// ln(erf(x)) for x >= 0. Stays accurate as x -> 0 (-> ln(2x/sqrt(pi)))
/// and as x grows (-> 0 from below). Returns -inf at x = 0.
double log_erf(double x);

/// ln(erfc(x)) for x >= 0; usable far beyond the underflow point of erfc.
double log_erfc(double x);

}  // namespace hsb
