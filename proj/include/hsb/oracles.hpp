#pragma once

#include <functional>

#include "hsb/logreal.hpp"
#include "hsb/pmap.hpp"
#include "hsb/problem.hpp"

namespace hsb {

/// Three-regime layer classification from the boundary values, with the
/// degenerate lines taking precedence over the non-strict inequalities:
///   beta > alpha            -> LeftLayer
///   beta < alpha - q/p      -> RightLayer
///   otherwise               -> NoLayer
///   beta == alpha           -> DegenerateConstant (exact comparison)
///   beta == alpha - q/p     -> DegenerateLinear   (exact comparison)
LayerClass classify_layer(const ScalarParams& params);

/// Exact solution of eps y'' + p (y')^2 + q y' = 0, y(0)=alpha, y(1)=beta.
/// Assembled from its four exponentials in the log domain, grouped so no
/// catastrophic cancellation occurs anywhere on [0,1]; finite for all
/// eps >= 1e-9. Degenerate parameter lines return the constant/linear
/// solutions exactly.
double oracle_p1(const ScalarParams& params, double x);

struct BoundaryDerivatives {
  LogReal left;   // y'(0)
  LogReal right;  // y'(1)
};

/// Boundary derivatives of the same solution; magnitudes of order
/// e^{(beta-alpha) p / eps} exceed double range, hence LogReal.
BoundaryDerivatives oracle_p1_derivatives(const ScalarParams& params);

/// Interior derivative and second derivative of the exact solution,
/// used by the traveling-wave residual checks.
LogReal oracle_p1_slope(const ScalarParams& params, double x);
LogReal oracle_p1_curvature(const ScalarParams& params, double x);

/// General-solution coefficients C1, C2 of y = (eps/p) ln(C1 + C2 e^{-qx/eps})
/// fitted to the boundary conditions. The log argument must stay positive on
/// [0,1]; being monotone in x, positivity is checked at the endpoints.
struct P1GeneralCoefficients {
  LogReal c1;
  LogReal c2;
};
P1GeneralCoefficients p1_general_coefficients(const ScalarParams& params);
double p1_general_solution(const P1GeneralCoefficients& c,
                           const ScalarParams& params, double x);

/// Exact solution of eps y'' + p (y')^2 + q y' + r = 0 with constant q, r.
/// Requires q^2 - 4 p r > 0 (real distinct characteristic roots); raises
/// ComplexRoots otherwise. Reduces exactly to oracle_p1 for r = 0.
double oracle_p2_constant(const ScalarParams& params, double x);

/// Implicit exact solution of eps y'' + p(y) (y')^2 + q (y')  = 0 with
/// constant q: solves the implicit relation by monotone bisection in y
/// (tolerance 1e-12), with P evaluated by log-domain quadrature.
double oracle_p3_implicit(const ProblemSpec& spec, double x);
double oracle_p3_implicit(const PIntegralMap& pm, double q_const, double alpha,
                          double beta, double x);

/// Boundary derivatives of the P3 solution. The left one is
///   (q/eps) (P(beta)-P(alpha)) / (1 - e^{-q/eps}) * exp(-G(alpha)/eps).
LogReal oracle_p3_left_derivative(const ProblemSpec& spec);
LogReal oracle_p3_right_derivative(const ProblemSpec& spec);

/// Constant-q value of the P3 coefficient map, raising unless q(x) is
/// constant; also used to decide oracle availability.
double p3_constant_q(const ProblemSpec& spec);
PIntegralMap p3_map(const ProblemSpec& spec, double rel_tol = 1e-11);

/// Similarity variable bundle z = x t^{-1/2}.
struct SelfSimilarPoint {
  double z;
  double x;
  double t;
  static SelfSimilarPoint from_xt(double x, double t);
};

/// Exact self-similar profile W(z) of the potential Burgers problem,
/// W(z) = eps ln[(e^{beta/eps} - e^{alpha/eps}) erf(z/(2 sqrt(eps)))
///               + e^{alpha/eps}], assembled as a sum of two nonnegative
/// log-domain terms (erf and erfc split).
double oracle_p4(const ScalarParams& params, double z);
double oracle_p4_xt(const ScalarParams& params, double x, double t);

/// W'(0) = sqrt(eps/pi) (e^{(beta-alpha)/eps} - 1).
LogReal oracle_p4_derivative(const ScalarParams& params);

/// Closed-form oracle availability and a reusable point evaluator
/// (precomputes the P map for P3 so grid sweeps stay cheap).
bool oracle_exists(const ProblemSpec& spec);
std::function<double(double)> make_oracle(const ProblemSpec& spec);

}  // namespace hsb
