#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hsb/logreal.hpp"
#include "hsb/mesh.hpp"
#include "hsb/pmap.hpp"
#include "hsb/problem.hpp"

namespace hsb {

/// Spatial coefficient of a transformed problem; either a constant (cheap
/// path, and required by the 2D solver) or a function of the coordinates.
struct Coefficient {
  bool is_const = true;
  double value = 0.0;
  std::function<double(double, double)> fn;

  double operator()(double x1, double x2 = 0.0) const {
    return is_const ? value : fn(x1, x2);
  }
  static Coefficient constant(double v) {
    Coefficient c;
    c.value = v;
    return c;
  }
  static Coefficient of(std::function<double(double, double)> f) {
    Coefficient c;
    c.is_const = false;
    c.fn = std::move(f);
    return c;
  }
};

/// Transformed linear problem
///   a2 * Lap u + a1 . grad u + a0 * u = 0
/// with Dirichlet data held in the log domain: the boundary values
/// A = e^{alpha p/eps}, B = e^{beta p/eps} overflow doubles in exactly the
/// regimes of interest. a2 is a nonzero constant.
struct LinearProblem {
  int dim = 1;
  double a2 = 0.0;
  std::vector<Coefficient> a1;  // one entry per dimension
  Coefficient a0;
  LogReal bc_left;   // face x1 = 0
  LogReal bc_right;  // face x1 = 1
};

/// y = (eps/p) ln u applied to P1 (r = 0) or P2:
///   eps^2 u'' + eps q(x) u' + p r(x) u = 0, u(0) = A, u(1) = B.
LinearProblem transform_p2(const ProblemSpec& spec);

/// u = P(y) applied to P3: eps u'' + q(x) u' = 0 with boundary data
/// P(alpha), P(beta); the returned map provides the forward and inverse
/// handles for post-processing.
struct P3Transform {
  LinearProblem lp;
  std::shared_ptr<const PIntegralMap> map;
};
P3Transform transform_p3(const ProblemSpec& spec, double rel_tol = 1e-11);

/// w = (eps/p) ln u applied to the 2D elliptic problem:
///   eps^2 Lap u + eps q(x) . grad u + p r(x) u = 0.
LinearProblem transform_p5(const ProblemSpec& spec);

/// Inverse of the P2-style substitution: y = (eps/p) * logmag per node.
/// Every node must be strictly positive (sign +1); a violating node raises
/// NonpositiveValue carrying the node index.
GridFunction inverse_map_p2(const LogGridFunction& u, double p, double eps);

/// Inverse of the P3-style substitution: y = P^{-1}(u) per node by monotone
/// bisection within [y_lo, y_hi]. P is defined on the whole real line, so
/// nonpositive u values are legitimate here (P(y) <= 0 for y <= 0).
GridFunction inverse_map_p3(const LogGridFunction& u, const PIntegralMap& map,
                            double y_lo, double y_hi);

/// A caller-supplied smooth positive field with its derivatives; the check
/// never differentiates numerically itself.
struct FieldPoint {
  std::vector<double> x;
  double t = 0.0;
};
struct FieldData {
  double value = 0.0;
  std::vector<double> gradient;
  double laplacian = 0.0;
  double dt = 0.0;  // time derivative, parabolic form only
};
using Field = std::function<FieldData(const FieldPoint&)>;

enum class ResidualForm {
  Elliptic,       // P5: R_nl(w) == [eps^2 Lap u + eps q.grad u + p r u]/(p u)
  Parabolic,      // same with the w_t / u_t terms included
  PSubstitution,  // P6: R_nl(w) == [eps Lap u + q(x,w).grad u]/P'(w)
};

/// Verifies the exact linearization identity at each sample and returns the
/// maximum of |LHS - RHS| / (|LHS| + |RHS| + tiny). For PSubstitution the
/// sample w is recovered as P^{-1}(u) inside [w_lo, w_hi].
double residual_identity_check(const ProblemSpec& spec, const Field& u_field,
                               std::span<const FieldPoint> samples,
                               ResidualForm form, double w_lo = 0.0,
                               double w_hi = 0.0);

}  // namespace hsb
