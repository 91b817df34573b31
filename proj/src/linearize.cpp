#include "hsb/linearize.hpp"

#include <cmath>

#include "hsb/error.hpp"

namespace hsb {

namespace {

Coefficient from_expr_1d(const Expr& e, double eps, double scale) {
  if (e.is_constant())
    return Coefficient::constant(scale * e.eval1(0.0, eps));
  return Coefficient::of([e, eps, scale](double x, double) {
    return scale * e.eval1(x, eps);
  });
}

Coefficient from_expr_2d(const Expr& e, double eps, double scale, int dim) {
  if (e.is_constant())
    return Coefficient::constant(scale * e.eval1(0.0, eps));
  return Coefficient::of([e, eps, scale, dim](double x1, double x2) {
    const double v[2] = {x1, x2};
    return scale * e.eval(std::span<const double>(v, static_cast<std::size_t>(dim)), eps);
  });
}

}  // namespace

LinearProblem transform_p2(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::P1 && spec.kind != ProblemKind::P2)
    raise(Errc::invalid_argument, "transform_p2 expects a P1 or P2 spec");
  const double eps = spec.params.eps;
  const double p = spec.params.p;
  if (p == 0.0) raise(Errc::illegal_sign, "transform requires p != 0");

  LinearProblem lp;
  lp.dim = 1;
  lp.a2 = eps * eps;
  if (spec.kind == ProblemKind::P1) {
    lp.a1 = {Coefficient::constant(eps * spec.params.q)};
    lp.a0 = Coefficient::constant(0.0);
  } else {
    lp.a1 = {from_expr_1d(spec.coeffs.at("q"), eps, eps)};
    lp.a0 = from_expr_1d(spec.coeffs.at("r"), eps, p);
  }
  lp.bc_left = LogReal::exp_of(spec.params.alpha * p / eps);
  lp.bc_right = LogReal::exp_of(spec.params.beta * p / eps);
  return lp;
}

P3Transform transform_p3(const ProblemSpec& spec, double rel_tol) {
  if (spec.kind != ProblemKind::P3)
    raise(Errc::invalid_argument, "transform_p3 expects a P3 spec");
  const double eps = spec.params.eps;
  auto map = std::make_shared<PIntegralMap>(spec.coeffs.at("p"), eps, rel_tol);

  P3Transform tr;
  tr.lp.dim = 1;
  tr.lp.a2 = eps;
  tr.lp.a1 = {from_expr_1d(spec.coeffs.at("q"), eps, 1.0)};
  tr.lp.a0 = Coefficient::constant(0.0);
  tr.lp.bc_left = map->forward(spec.params.alpha);
  tr.lp.bc_right = map->forward(spec.params.beta);
  tr.map = std::move(map);
  return tr;
}

LinearProblem transform_p5(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::P5)
    raise(Errc::invalid_argument, "transform_p5 expects a P5 spec");
  if (spec.dim != 2)
    raise(Errc::unsupported_dimension, "transform_p5 handles dim = 2");
  const double eps = spec.params.eps;
  const double p = spec.params.p;
  if (p == 0.0) raise(Errc::illegal_sign, "transform requires p != 0");

  LinearProblem lp;
  lp.dim = 2;
  lp.a2 = eps * eps;
  lp.a1 = {from_expr_2d(spec.coeffs.at("q1"), eps, eps, 2),
           from_expr_2d(spec.coeffs.at("q2"), eps, eps, 2)};
  lp.a0 = from_expr_2d(spec.coeffs.at("r"), eps, p, 2);
  lp.bc_left = LogReal::exp_of(spec.params.alpha * p / eps);
  lp.bc_right = LogReal::exp_of(spec.params.beta * p / eps);
  return lp;
}

GridFunction inverse_map_p2(const LogGridFunction& u, double p, double eps) {
  if (p == 0.0) raise(Errc::illegal_sign, "inverse map requires p != 0");
  GridFunction y;
  y.mesh = u.mesh;
  y.values.resize(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.values[i].sign() != +1)
      throw Error(Errc::nonpositive_value,
                  "non-positive transformed value at node " + std::to_string(i),
                  i);
    y.values[i] = (eps / p) * u.values[i].logmag();
  }
  return y;
}

GridFunction inverse_map_p3(const LogGridFunction& u, const PIntegralMap& map,
                            double y_lo, double y_hi) {
  GridFunction y;
  y.mesh = u.mesh;
  y.values.resize(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i)
    y.values[i] = map.invert(u.values[i], y_lo, y_hi);
  return y;
}

namespace {

struct CoeffAt {
  std::vector<double> q;  // q_i at the sample (dim entries)
  double r = 0.0;
};

CoeffAt eval_p5_coeffs(const ProblemSpec& spec, const FieldPoint& pt) {
  CoeffAt c;
  const std::span<const double> xs(pt.x.data(), pt.x.size());
  for (int i = 1; i <= spec.dim; ++i)
    c.q.push_back(
        spec.coeffs.at("q" + std::to_string(i)).eval(xs, spec.params.eps));
  c.r = spec.coeffs.at("r").eval(xs, spec.params.eps);
  return c;
}

double relative_deviation(double lhs, double rhs) {
  return std::fabs(lhs - rhs) / (std::fabs(lhs) + std::fabs(rhs) + 1e-300);
}

}  // namespace

double residual_identity_check(const ProblemSpec& spec, const Field& u_field,
                               std::span<const FieldPoint> samples,
                               ResidualForm form, double w_lo, double w_hi) {
  const double eps = spec.params.eps;
  double worst = 0.0;

  const bool p_substitution = form == ResidualForm::PSubstitution;
  if (p_substitution && spec.kind != ProblemKind::P6)
    raise(Errc::invalid_argument, "PSubstitution form expects a P6 spec");
  if (!p_substitution && spec.kind != ProblemKind::P5)
    raise(Errc::invalid_argument, "elliptic/parabolic forms expect a P5 spec");

  std::unique_ptr<PIntegralMap> pmap;
  if (p_substitution) {
    if (!(w_lo < w_hi))
      raise(Errc::invalid_argument,
            "PSubstitution needs a bracket w_lo < w_hi for P^{-1}");
    pmap = std::make_unique<PIntegralMap>(spec.coeffs.at("p"), eps);
  }

  for (const FieldPoint& pt : samples) {
    if (static_cast<int>(pt.x.size()) != spec.dim)
      raise(Errc::invalid_argument, "sample dimension mismatch");
    const FieldData f = u_field(pt);
    if (static_cast<int>(f.gradient.size()) != spec.dim)
      raise(Errc::invalid_argument, "field gradient dimension mismatch");

    double grad2 = 0.0;
    for (double g : f.gradient) grad2 += g * g;

    if (!p_substitution) {
      const double p = spec.params.p;
      if (!(f.value > 0.0))
        raise(Errc::nonpositive_value, "field must be positive at samples");
      const CoeffAt c = eval_p5_coeffs(spec, pt);
      const double u = f.value;

      // w = (eps/p) ln u and its derivatives by the chain rule.
      const double scale = eps / p;
      double q_dot_gw = 0.0, q_dot_gu = 0.0;
      for (int i = 0; i < spec.dim; ++i) {
        q_dot_gw += c.q[static_cast<std::size_t>(i)] * scale * f.gradient[static_cast<std::size_t>(i)] / u;
        q_dot_gu += c.q[static_cast<std::size_t>(i)] * f.gradient[static_cast<std::size_t>(i)];
      }
      const double lap_w = scale * (f.laplacian / u - grad2 / (u * u));
      const double grad_w2 = scale * scale * grad2 / (u * u);

      double lhs = eps * lap_w + p * grad_w2 + q_dot_gw + c.r;
      double rhs =
          (eps * eps * f.laplacian + eps * q_dot_gu + p * c.r * u) / (p * u);
      if (form == ResidualForm::Parabolic) {
        lhs -= scale * f.dt / u;          // w_t
        rhs -= eps * f.dt / (p * u);      // eps u_t / (p u)
      }
      worst = std::max(worst, relative_deviation(lhs, rhs));
    } else {
      // u = P(w): recover w, then check
      //   eps Lap w + p(w) |grad w|^2 + q(x,w) . grad w
      //     == [eps Lap u + q(x,w) . grad u] / P'(w).
      const double w = pmap->invert(LogReal::from_real(f.value), w_lo, w_hi);
      const double p_w = spec.coeffs.at("p").eval1(w, eps);
      const double pprime = std::exp(pmap->exponent(w));  // P'(w) = e^{G(w)/eps}
      if (!std::isfinite(pprime) || pprime == 0.0)
        raise(Errc::range_exceeded, "P'(w) left double range at a sample");

      std::vector<double> xw(pt.x);
      xw.push_back(w);
      const std::span<const double> xws(xw.data(), xw.size());
      double q_dot_gw = 0.0, q_dot_gu = 0.0;
      for (int i = 1; i <= spec.dim; ++i) {
        const double qi =
            spec.coeffs.at("q" + std::to_string(i)).eval(xws, eps);
        q_dot_gu += qi * f.gradient[static_cast<std::size_t>(i - 1)];
        q_dot_gw += qi * f.gradient[static_cast<std::size_t>(i - 1)] / pprime;
      }
      const double grad_w2 = grad2 / (pprime * pprime);
      const double lap_w = f.laplacian / pprime - p_w * grad2 / (eps * pprime * pprime);

      const double lhs = eps * lap_w + p_w * grad_w2 + q_dot_gw;
      const double rhs = (eps * f.laplacian + q_dot_gu) / pprime;
      worst = std::max(worst, relative_deviation(lhs, rhs));
    }
  }
  return worst;
}

}  // namespace hsb
