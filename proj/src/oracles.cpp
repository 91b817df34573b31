#include "hsb/oracles.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "hsb/error.hpp"
#include "hsb/special.hpp"

namespace hsb {

namespace {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    raise(Errc::invalid_argument, "x must lie in [0,1]");
}

// The two nonnegative layer weights of the exact P1/P3 solutions:
//   d1(x) = e^{-qx/eps} - e^{-q/eps}   (vanishes exactly at x = 1)
//   d2(x) = 1 - e^{-qx/eps}            (vanishes exactly at x = 0)
// For q < 0 both come out negative; callers using magnitudes take abs().
LogReal layer_weight_d1(double q, double eps, double x) {
  return lr_sub(LogReal::exp_of(-q * x / eps), LogReal::exp_of(-q / eps));
}
LogReal layer_weight_d2(double q, double eps, double x) {
  return lr_sub(LogReal::one(), LogReal::exp_of(-q * x / eps));
}

}  // namespace

LayerClass classify_layer(const ScalarParams& params) {
  const double alpha = params.alpha;
  const double beta = params.beta;
  if (beta == alpha) return LayerClass::DegenerateConstant;
  if (beta == alpha - params.q / params.p) return LayerClass::DegenerateLinear;
  if (beta > alpha) return LayerClass::LeftLayer;
  if (beta < alpha - params.q / params.p) return LayerClass::RightLayer;
  return LayerClass::NoLayer;
}

double oracle_p1(const ScalarParams& params, double x) {
  check_unit_interval(x);
  const double eps = params.eps, p = params.p, q = params.q;
  const double alpha = params.alpha, beta = params.beta;

  switch (classify_layer(params)) {
    case LayerClass::DegenerateConstant:
      return alpha;
    case LayerClass::DegenerateLinear:
      return alpha - (q / p) * x;
    default:
      break;
  }

  const LogReal a = LogReal::exp_of(alpha * p / eps);
  const LogReal b = LogReal::exp_of(beta * p / eps);
  const LogReal num = lr_add(lr_mul(a, layer_weight_d1(q, eps, x)),
                             lr_mul(b, layer_weight_d2(q, eps, x)));
  const LogReal den = lr_sub(LogReal::one(), LogReal::exp_of(-q / eps));
  if (num.sign() <= 0 || den.sign() <= 0)
    raise(Errc::nonpositive_argument,
          "log argument lost positivity; corrupt P1 parameters");
  return (eps / p) * (lr_ln(num) - lr_ln(den));
}

BoundaryDerivatives oracle_p1_derivatives(const ScalarParams& params) {
  const double eps = params.eps, p = params.p, q = params.q;
  const double alpha = params.alpha, beta = params.beta;
  const LogReal qp = LogReal::from_real(q / p);
  const LogReal num_l =
      lr_sub(LogReal::exp_of((beta - alpha) * p / eps), LogReal::one());
  const LogReal den_l = lr_sub(LogReal::one(), LogReal::exp_of(-q / eps));
  const LogReal num_r =
      lr_sub(LogReal::one(), LogReal::exp_of((alpha - beta) * p / eps));
  const LogReal den_r = lr_sub(LogReal::exp_of(q / eps), LogReal::one());
  return {lr_mul(qp, lr_div(num_l, den_l)), lr_mul(qp, lr_div(num_r, den_r))};
}

namespace {

// Shared pieces of the interior-derivative formulas: with
// M(x) = [(A-B) e^{-qx/eps} + B - A e^{-q/eps}] / (1 - e^{-q/eps}),
// the solution is y = (eps/p) ln M and
//   y'  = -(q/p)      * S,        S = (A-B) e^{-qx/eps} / num,
//   y'' = (q^2/(p eps)) * S (1-S), 1-S = (B - A e^{-q/eps}) / num,
// where num is M's numerator.
struct P1SlopeParts {
  LogReal s;
  LogReal one_minus_s;
};

P1SlopeParts p1_slope_parts(const ScalarParams& params, double x) {
  const double eps = params.eps, p = params.p, q = params.q;
  const LogReal a = LogReal::exp_of(params.alpha * p / eps);
  const LogReal b = LogReal::exp_of(params.beta * p / eps);
  const LogReal num = lr_add(lr_mul(a, layer_weight_d1(q, eps, x)),
                             lr_mul(b, layer_weight_d2(q, eps, x)));
  if (num.sign() <= 0)
    raise(Errc::nonpositive_argument, "corrupt P1 parameters");
  const LogReal s =
      lr_div(lr_mul(lr_sub(a, b), LogReal::exp_of(-q * x / eps)), num);
  const LogReal one_minus_s =
      lr_div(lr_sub(b, lr_mul(a, LogReal::exp_of(-q / eps))), num);
  return {s, one_minus_s};
}

}  // namespace

LogReal oracle_p1_slope(const ScalarParams& params, double x) {
  check_unit_interval(x);
  const auto parts = p1_slope_parts(params, x);
  return lr_mul(LogReal::from_real(-params.q / params.p), parts.s);
}

LogReal oracle_p1_curvature(const ScalarParams& params, double x) {
  check_unit_interval(x);
  const auto parts = p1_slope_parts(params, x);
  const double f = params.q * params.q / (params.p * params.eps);
  return lr_mul(LogReal::from_real(f), lr_mul(parts.s, parts.one_minus_s));
}

P1GeneralCoefficients p1_general_coefficients(const ScalarParams& params) {
  const double eps = params.eps, p = params.p, q = params.q;
  const LogReal a = LogReal::exp_of(params.alpha * p / eps);
  const LogReal b = LogReal::exp_of(params.beta * p / eps);
  const LogReal den = lr_sub(LogReal::one(), LogReal::exp_of(-q / eps));
  P1GeneralCoefficients c;
  c.c1 = lr_div(lr_sub(b, lr_mul(a, LogReal::exp_of(-q / eps))), den);
  c.c2 = lr_div(lr_sub(a, b), den);
  // Positivity of C1 + C2 e^{-qx/eps} on [0,1]: the argument is monotone in
  // x, so the extremes sit at the endpoints.
  const LogReal at0 = lr_add(c.c1, c.c2);
  const LogReal at1 = lr_add(c.c1, lr_mul(c.c2, LogReal::exp_of(-q / eps)));
  if (at0.sign() <= 0 || at1.sign() <= 0)
    raise(Errc::nonpositive_argument,
          "general solution log argument not positive on [0,1]");
  return c;
}

double p1_general_solution(const P1GeneralCoefficients& c,
                           const ScalarParams& params, double x) {
  const LogReal arg =
      lr_add(c.c1, lr_mul(c.c2, LogReal::exp_of(-params.q * x / params.eps)));
  if (arg.sign() <= 0)
    raise(Errc::nonpositive_argument, "log argument not positive");
  return (params.eps / params.p) * lr_ln(arg);
}

double oracle_p2_constant(const ScalarParams& params, double x) {
  check_unit_interval(x);
  const double eps = params.eps, p = params.p, q = params.q, r = params.r;
  const double disc = q * q - 4.0 * p * r;
  if (!(disc > 0.0))
    raise(Errc::complex_roots,
          "q^2 - 4 p r must be positive for the constant-coefficient oracle");
  const double sq = std::sqrt(disc);
  const double lam_hi = 0.5 * (-q + sq);
  const double lam_lo = 0.5 * (-q - sq);

  // u(x) = [A g1(x) + B g2(x)] / (E+(1) - E-(1)) with the two nonnegative
  // bridge functions
  //   g1(x) = E+(1)E-(x) - E-(1)E+(x)   (vanishes exactly at x = 1)
  //   g2(x) = E+(x) - E-(x)             (vanishes exactly at x = 0)
  const LogReal a = LogReal::exp_of(params.alpha * p / eps);
  const LogReal b = LogReal::exp_of(params.beta * p / eps);
  const LogReal g1 = lr_sub(LogReal::exp_of((lam_hi + lam_lo * x) / eps),
                            LogReal::exp_of((lam_lo + lam_hi * x) / eps));
  const LogReal g2 = lr_sub(LogReal::exp_of(lam_hi * x / eps),
                            LogReal::exp_of(lam_lo * x / eps));
  const LogReal den = lr_sub(LogReal::exp_of(lam_hi * 1.0 / eps),
                             LogReal::exp_of(lam_lo * 1.0 / eps));
  const LogReal u = lr_div(lr_add(lr_mul(a, g1), lr_mul(b, g2)), den);
  if (u.sign() <= 0)
    raise(Errc::nonpositive_argument,
          "transformed solution lost positivity; corrupt P2 parameters");
  return (eps / p) * lr_ln(u);
}

double p3_constant_q(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::P3)
    raise(Errc::invalid_argument, "expected a P3 spec");
  const Expr& qx = spec.coeffs.at("q");
  if (!qx.is_constant())
    raise(Errc::invalid_argument,
          "the implicit oracle requires a constant q(x)");
  return qx.eval1(0.0, spec.params.eps);
}

PIntegralMap p3_map(const ProblemSpec& spec, double rel_tol) {
  if (spec.kind != ProblemKind::P3)
    raise(Errc::invalid_argument, "expected a P3 spec");
  return PIntegralMap(spec.coeffs.at("p"), spec.params.eps, rel_tol);
}

double oracle_p3_implicit(const PIntegralMap& pm, double q_const, double alpha,
                          double beta, double x) {
  check_unit_interval(x);
  if (beta == alpha) return alpha;
  if (x == 0.0) return alpha;
  if (x == 1.0) return beta;

  const double eps = pm.eps();
  // Solve the implicit relation in the rearranged form
  //   |P(y)-P(alpha)| * |d1(x)| = |P(beta)-P(y)| * |d2(x)|,
  // whose two sides are single oriented log-domain integrals; this keeps the
  // bisection well conditioned even where P' is exponentially small.
  LogReal d1, d2;
  if (q_const == 0.0) {
    d1 = LogReal::from_real(1.0 - x);
    d2 = LogReal::from_real(x);
  } else {
    d1 = layer_weight_d1(q_const, eps, x).abs();
    d2 = layer_weight_d2(q_const, eps, x).abs();
  }
  if (d2.is_zero()) return alpha;
  if (d1.is_zero()) return beta;

  double t_lo = 0.0, t_hi = 1.0;
  LogReal ia_lo;  // |P(y(t_lo)) - P(alpha)|, grows as t_lo moves right
  LogReal ib_hi;  // |P(beta) - P(y(t_hi))|, grows as t_hi moves left
  const double span = beta - alpha;
  auto y_at = [&](double t) { return alpha + t * span; };

  for (int it = 0; it < 200 && (t_hi - t_lo) * std::fabs(span) > 1e-12; ++it) {
    const double t_mid = 0.5 * (t_lo + t_hi);
    const LogReal ia_mid =
        lr_add(ia_lo, pm.between(y_at(t_lo), y_at(t_mid)).abs());
    const LogReal ib_mid =
        lr_add(ib_hi, pm.between(y_at(t_mid), y_at(t_hi)).abs());
    const LogReal lhs = lr_mul(ia_mid, d1);
    const LogReal rhs = lr_mul(ib_mid, d2);
    if (lr_cmp(lhs, rhs) < 0) {
      t_lo = t_mid;
      ia_lo = ia_mid;
    } else {
      t_hi = t_mid;
      ib_hi = ib_mid;
    }
  }
  return y_at(0.5 * (t_lo + t_hi));
}

double oracle_p3_implicit(const ProblemSpec& spec, double x) {
  const double q = p3_constant_q(spec);
  const PIntegralMap pm = p3_map(spec);
  return oracle_p3_implicit(pm, q, spec.params.alpha, spec.params.beta, x);
}

namespace {

LogReal p3_boundary_derivative(const ProblemSpec& spec, bool left) {
  const double q = p3_constant_q(spec);
  const PIntegralMap pm = p3_map(spec);
  const double eps = spec.params.eps;
  const double alpha = spec.params.alpha, beta = spec.params.beta;
  const LogReal pdiff = pm.between(alpha, beta);
  if (pdiff.is_zero()) return LogReal{};
  LogReal factor = LogReal::one();
  if (q != 0.0) {
    const LogReal den = lr_sub(LogReal::one(), LogReal::exp_of(-q / eps));
    factor = lr_div(LogReal::from_real(q / eps), den);
  }
  LogReal r = lr_mul(factor, pdiff);
  if (left) {
    return lr_mul(r, LogReal::exp_of(-pm.exponent(alpha)));
  }
  r = lr_mul(r, LogReal::exp_of(-q / eps));
  return lr_mul(r, LogReal::exp_of(-pm.exponent(beta)));
}

}  // namespace

LogReal oracle_p3_left_derivative(const ProblemSpec& spec) {
  return p3_boundary_derivative(spec, true);
}

LogReal oracle_p3_right_derivative(const ProblemSpec& spec) {
  return p3_boundary_derivative(spec, false);
}

SelfSimilarPoint SelfSimilarPoint::from_xt(double x, double t) {
  if (!(t > 0.0)) raise(Errc::invalid_argument, "similarity time must be > 0");
  if (!(x >= 0.0)) raise(Errc::invalid_argument, "similarity x must be >= 0");
  return {x / std::sqrt(t), x, t};
}

double oracle_p4(const ScalarParams& params, double z) {
  if (!(z >= 0.0)) raise(Errc::invalid_argument, "similarity variable z must be >= 0");
  const double eps = params.eps;
  const double zeta = z / (2.0 * std::sqrt(eps));
  // (e^{b/e} - e^{a/e}) erf + e^{a/e}  ==  e^{b/e} erf + e^{a/e} erfc:
  // two nonnegative terms, no cancellation for either sign of beta - alpha.
  const LogReal term_beta =
      lr_mul(LogReal::exp_of(params.beta / eps),
             LogReal::from_log(+1, log_erf(zeta)));
  const LogReal term_alpha =
      lr_mul(LogReal::exp_of(params.alpha / eps),
             LogReal::from_log(+1, log_erfc(zeta)));
  const LogReal arg = lr_add(term_beta, term_alpha);
  if (arg.sign() <= 0)
    raise(Errc::nonpositive_argument, "corrupt P4 parameters");
  return eps * lr_ln(arg);
}

double oracle_p4_xt(const ScalarParams& params, double x, double t) {
  return oracle_p4(params, SelfSimilarPoint::from_xt(x, t).z);
}

LogReal oracle_p4_derivative(const ScalarParams& params) {
  const double eps = params.eps;
  const LogReal scale = LogReal::from_real(std::sqrt(eps / std::numbers::pi));
  const LogReal diff = lr_sub(
      LogReal::exp_of((params.beta - params.alpha) / eps), LogReal::one());
  return lr_mul(scale, diff);
}

bool oracle_exists(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::P1:
    case ProblemKind::P4:
      return true;
    case ProblemKind::P2: {
      const Expr& q = spec.coeffs.at("q");
      const Expr& r = spec.coeffs.at("r");
      if (!q.is_constant() || !r.is_constant()) return false;
      const double qc = q.eval1(0.0, spec.params.eps);
      const double rc = r.eval1(0.0, spec.params.eps);
      return qc * qc - 4.0 * spec.params.p * rc > 0.0;
    }
    case ProblemKind::P3:
      return spec.coeffs.at("q").is_constant();
    default:
      return false;
  }
}

std::function<double(double)> make_oracle(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::P1: {
      const ScalarParams params = spec.params;
      return [params](double x) { return oracle_p1(params, x); };
    }
    case ProblemKind::P2: {
      if (!oracle_exists(spec))
        raise(Errc::invalid_argument,
              "P2 oracle needs constant coefficients with q^2 - 4 p r > 0");
      ScalarParams params = spec.params;
      params.q = spec.coeffs.at("q").eval1(0.0, params.eps);
      params.r = spec.coeffs.at("r").eval1(0.0, params.eps);
      return [params](double x) { return oracle_p2_constant(params, x); };
    }
    case ProblemKind::P3: {
      const double q = p3_constant_q(spec);
      auto pm = std::make_shared<PIntegralMap>(p3_map(spec));
      const double alpha = spec.params.alpha, beta = spec.params.beta;
      return [pm, q, alpha, beta](double x) {
        return oracle_p3_implicit(*pm, q, alpha, beta, x);
      };
    }
    case ProblemKind::P4: {
      const ScalarParams params = spec.params;
      return [params](double z) { return oracle_p4(params, z); };
    }
    default:
      raise(Errc::invalid_argument,
            std::string("no closed-form oracle for kind ") +
                kind_name(spec.kind));
  }
}

}  // namespace hsb
