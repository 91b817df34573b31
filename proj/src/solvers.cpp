#include "hsb/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hsb/error.hpp"
#include "hsb/oracles.hpp"

namespace hsb {

std::vector<double> thomas_solve(Tridiag t) {
  const std::size_t n = t.diag.size();
  if (n == 0 || t.sub.size() != n - 1 || t.super.size() != n - 1 ||
      t.rhs.size() != n)
    raise(Errc::invalid_argument, "inconsistent tridiagonal dimensions");
  for (std::size_t i = 1; i < n; ++i) {
    const double pivot = t.diag[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot))
      raise(Errc::zero_pivot, "zero pivot in tridiagonal elimination");
    const double w = t.sub[i - 1] / pivot;
    t.diag[i] -= w * t.super[i - 1];
    t.rhs[i] -= w * t.rhs[i - 1];
  }
  if (t.diag[n - 1] == 0.0 || !std::isfinite(t.diag[n - 1]))
    raise(Errc::zero_pivot, "zero pivot in tridiagonal elimination");
  std::vector<double> x(n);
  x[n - 1] = t.rhs[n - 1] / t.diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    x[i] = (t.rhs[i] - t.super[i] * x[i + 1]) / t.diag[i];
  return x;
}

namespace {

double rescale_exponent(LogReal l, LogReal r) {
  if (l.is_zero() && r.is_zero()) return 0.0;
  if (l.is_zero()) return r.logmag();
  if (r.is_zero()) return l.logmag();
  return std::max(l.logmag(), r.logmag());
}

double scaled_value(LogReal v, double m) {
  if (v.is_zero()) return 0.0;
  return static_cast<double>(v.sign()) * std::exp(v.logmag() - m);
}

LogReal unscaled(double v, double m) {
  if (v == 0.0) return LogReal{};
  return LogReal::from_log(v > 0.0 ? +1 : -1, std::log(std::fabs(v)) + m);
}

void check_bc_range(const LinearProblem& lp) {
  // Once the two boundary magnitudes differ by more than one representable
  // exponent range, interior values of the rescaled variable underflow and
  // a double-precision grid cannot carry the solution.
  if (!lp.bc_left.is_zero() && !lp.bc_right.is_zero() &&
      std::fabs(lp.bc_left.logmag() - lp.bc_right.logmag()) > 700.0)
    raise(Errc::range_exceeded,
          "boundary data magnitudes span more than e^700; grid solvers are "
          "limited to (beta-alpha)p/eps <= 700, use the oracles instead");
}

struct UpwindRow {
  double sub, diag, super;
};

UpwindRow upwind_row(double a2, double a1, double a0, double hm, double hp) {
  UpwindRow r;
  r.sub = 2.0 * a2 / (hm * (hm + hp));
  r.super = 2.0 * a2 / (hp * (hm + hp));
  r.diag = -2.0 * a2 / (hm * hp);
  if (a1 >= 0.0) {
    r.super += a1 / hp;
    r.diag -= a1 / hp;
  } else {
    r.sub += -a1 / hm;
    r.diag += a1 / hm;
  }
  const double slack = -r.diag - (r.sub + r.super);  // == 0 up to rounding
  if (a0 > 1e-12 * std::fabs(r.diag) + std::max(0.0, -slack))
    raise(Errc::dominance_lost,
          "zeroth-order term breaks diagonal dominance (p*r(x) > 0)");
  r.diag += a0;
  return r;
}

}  // namespace

LogGridFunction solve_linear_fd(const LinearProblem& lp, const Mesh& mesh) {
  if (lp.dim != 1)
    raise(Errc::unsupported_dimension, "solve_linear_fd handles dim = 1");
  if (!(lp.a2 > 0.0))
    raise(Errc::invalid_argument, "solve_linear_fd requires a2 > 0");
  check_bc_range(lp);

  const auto x = mesh.nodes();
  const std::size_t n = x.size();
  const double m = rescale_exponent(lp.bc_left, lp.bc_right);

  Tridiag t;
  t.sub.assign(n - 1, 0.0);
  t.super.assign(n - 1, 0.0);
  t.diag.assign(n, 0.0);
  t.rhs.assign(n, 0.0);

  t.diag[0] = 1.0;
  t.rhs[0] = scaled_value(lp.bc_left, m);
  t.diag[n - 1] = 1.0;
  t.rhs[n - 1] = scaled_value(lp.bc_right, m);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    const UpwindRow row = upwind_row(lp.a2, lp.a1.at(0)(x[i]), lp.a0(x[i]), hm, hp);
    t.sub[i - 1] = row.sub;
    t.diag[i] = row.diag;
    t.super[i] = row.super;
  }

  const std::vector<double> ubar = thomas_solve(std::move(t));

  LogGridFunction out;
  out.mesh = mesh;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = unscaled(ubar[i], m);
  // Boundary nodes carry the exact log-domain data, immune to underflow of
  // the rescaled representation.
  out.values[0] = lp.bc_left;
  out.values[n - 1] = lp.bc_right;
  return out;
}

namespace {

// Residual pieces of the untransformed equations; s is the centered slope.
struct NonlinearKind {
  ProblemKind kind;
  double eps, p;
  std::vector<double> qx;  // q(x_i) for P2/P3, r(x_i) likewise
  std::vector<double> rx;
  const Expr* p_of_y = nullptr;   // P3
  const Expr* q_of_xy = nullptr;  // Baseline01
};

double nl_value(const NonlinearKind& k, std::size_t i, double x, double y,
                double s) {
  switch (k.kind) {
    case ProblemKind::P1:
      return k.p * s * s + k.qx[i] * s;
    case ProblemKind::P2:
      return k.p * s * s + k.qx[i] * s + k.rx[i];
    case ProblemKind::P3:
      return k.p_of_y->eval1(y, k.eps) * s * s + k.qx[i] * s;
    case ProblemKind::Baseline01: {
      const double v[2] = {x, y};
      return k.p * s + k.q_of_xy->eval(std::span<const double>(v, 2), k.eps);
    }
    default:
      raise(Errc::invalid_argument, "unsupported kind for direct Newton");
  }
}

double nl_dslope(const NonlinearKind& k, std::size_t i, double y, double s) {
  switch (k.kind) {
    case ProblemKind::P1:
    case ProblemKind::P2:
      return 2.0 * k.p * s + k.qx[i];
    case ProblemKind::P3:
      return 2.0 * k.p_of_y->eval1(y, k.eps) * s + k.qx[i];
    case ProblemKind::Baseline01:
      return k.p;
    default:
      return 0.0;
  }
}

// dF/dy_i for the expression-coefficient kinds, by central differencing of
// the coefficient (no symbolic differentiation in the expression module).
double nl_dy(const NonlinearKind& k, std::size_t i, double x, double y,
             double s) {
  switch (k.kind) {
    case ProblemKind::P3: {
      const double d = 1e-6 * (1.0 + std::fabs(y));
      const double hi = k.p_of_y->eval1(y + d, k.eps);
      const double lo = k.p_of_y->eval1(y - d, k.eps);
      return (hi - lo) / (2.0 * d) * s * s;
    }
    case ProblemKind::Baseline01: {
      const double d = 1e-6 * (1.0 + std::fabs(y));
      const double vhi[2] = {x, y + d};
      const double vlo[2] = {x, y - d};
      return (k.q_of_xy->eval(std::span<const double>(vhi, 2), k.eps) -
              k.q_of_xy->eval(std::span<const double>(vlo, 2), k.eps)) /
             (2.0 * d);
    }
    default:
      return 0.0;
  }
}

bool assemble_residual(const NonlinearKind& k, std::span<const double> x,
                       const std::vector<double>& y, std::vector<double>& f) {
  const std::size_t n = x.size();
  f.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    const double s = (y[i + 1] - y[i - 1]) / (hm + hp);
    const double y2 =
        2.0 * ((y[i + 1] - y[i]) / hp - (y[i] - y[i - 1]) / hm) / (hm + hp);
    f[i] = k.eps * y2 + nl_value(k, i, x[i], y[i], s);
    if (!std::isfinite(f[i])) return false;
  }
  return true;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::fabs(a));
  return m;
}

}  // namespace

SolveReport solve_direct_newton(const ProblemSpec& spec, const Mesh& mesh,
                                const SolverConfig& cfg) {
  const auto x = mesh.nodes();
  const std::size_t n = x.size();
  const double alpha = spec.params.alpha, beta = spec.params.beta;

  NonlinearKind k;
  k.kind = spec.kind;
  k.eps = spec.params.eps;
  k.p = spec.params.p;
  switch (spec.kind) {
    case ProblemKind::P1:
      k.qx.assign(n, spec.params.q);
      break;
    case ProblemKind::P2: {
      const Expr& q = spec.coeffs.at("q");
      const Expr& r = spec.coeffs.at("r");
      for (double xi : x) {
        k.qx.push_back(q.eval1(xi, k.eps));
        k.rx.push_back(r.eval1(xi, k.eps));
      }
      break;
    }
    case ProblemKind::P3: {
      const Expr& q = spec.coeffs.at("q");
      for (double xi : x) k.qx.push_back(q.eval1(xi, k.eps));
      k.p_of_y = &spec.coeffs.at("p");
      break;
    }
    case ProblemKind::Baseline01:
      k.q_of_xy = &spec.coeffs.at("q");
      break;
    default:
      raise(Errc::invalid_argument,
            "direct Newton handles P1, P2, P3 and Baseline01");
  }

  SolveReport rep;
  rep.solution.mesh = mesh;
  std::vector<double>& y = rep.solution.values;
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha + (beta - alpha) * x[i];

  std::vector<double> f, f_trial, y_trial(n);
  rep.status = SolveStatus::MaxIterations;

  if (!assemble_residual(k, x, y, f)) {
    rep.status = SolveStatus::Overflowed;
    rep.iterations = 0;
  } else {
    for (int iter = 1; iter <= cfg.newton_max_iter; ++iter) {
      rep.iterations = iter;
      const double norm_f = inf_norm(f);

      Tridiag jac;
      jac.sub.assign(n - 1, 0.0);
      jac.super.assign(n - 1, 0.0);
      jac.diag.assign(n, 1.0);
      jac.rhs.assign(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = x[i] - x[i - 1];
        const double hp = x[i + 1] - x[i];
        const double s = (y[i + 1] - y[i - 1]) / (hm + hp);
        const double ds = nl_dslope(k, i, y[i], s);
        jac.sub[i - 1] = 2.0 * k.eps / (hm * (hm + hp)) - ds / (hm + hp);
        jac.diag[i] = -2.0 * k.eps / (hm * hp) + nl_dy(k, i, x[i], y[i], s);
        jac.super[i] = 2.0 * k.eps / (hp * (hm + hp)) + ds / (hm + hp);
        jac.rhs[i] = -f[i];
      }

      std::vector<double> delta;
      try {
        delta = thomas_solve(std::move(jac));
      } catch (const Error&) {
        rep.status = SolveStatus::Diverged;
        break;
      }

      // Damped step: halve on residual increase, up to 30 halvings.
      double lambda = cfg.damping;
      bool accepted = false;
      for (int halvings = 0; halvings <= 30; ++halvings) {
        for (std::size_t i = 0; i < n; ++i) y_trial[i] = y[i] + lambda * delta[i];
        if (assemble_residual(k, x, y_trial, f_trial) &&
            inf_norm(f_trial) <= norm_f) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        rep.status = SolveStatus::Diverged;
        break;
      }
      y.swap(y_trial);
      f.swap(f_trial);

      const double step = lambda * inf_norm(delta);
      if (!std::isfinite(step) || !std::isfinite(inf_norm(y))) {
        rep.status = SolveStatus::Overflowed;
        break;
      }
      if (step <= cfg.newton_tol * std::max(1.0, inf_norm(y))) {
        rep.status = SolveStatus::Converged;
        break;
      }
    }
  }

  rep.boundary_residuals = {std::fabs(y.front() - alpha),
                            std::fabs(y.back() - beta)};
  if (oracle_exists(spec)) {
    const auto oracle = make_oracle(spec);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::fabs(y[i] - oracle(x[i])));
    rep.max_error = err;
  }
  return rep;
}

namespace {

SolveReport exact_degenerate_report(const ProblemSpec& spec, const Mesh& mesh,
                                    bool linear) {
  SolveReport rep;
  rep.solution.mesh = mesh;
  const auto x = mesh.nodes();
  const double slope =
      linear ? -spec.params.q / spec.params.p : 0.0;
  for (double xi : x)
    rep.solution.values.push_back(spec.params.alpha + slope * xi);
  rep.max_error = 0.0;
  rep.status = SolveStatus::Converged;
  return rep;
}

}  // namespace

SolveReport solve_pipeline(const ProblemSpec& spec, const Mesh& mesh) {
  // The degenerate parameter lines carry exact eps-independent solutions;
  // the transformed grid solve is not needed (and not exact) there.
  if (spec.kind == ProblemKind::P1) {
    const LayerClass cls = classify_layer(spec.params);
    if (cls == LayerClass::DegenerateConstant)
      return exact_degenerate_report(spec, mesh, false);
    if (cls == LayerClass::DegenerateLinear)
      return exact_degenerate_report(spec, mesh, true);
  } else if (spec.kind == ProblemKind::P3 &&
             spec.params.beta == spec.params.alpha) {
    return exact_degenerate_report(spec, mesh, false);
  } else if (spec.kind == ProblemKind::P2 &&
             spec.params.beta == spec.params.alpha) {
    const Expr& r = spec.coeffs.at("r");
    if (r.is_constant() && r.eval1(0.0, spec.params.eps) == 0.0)
      return exact_degenerate_report(spec, mesh, false);
  }

  SolveReport rep;
  rep.iterations = 0;
  rep.status = SolveStatus::Converged;

  std::shared_ptr<const PIntegralMap> pmap;
  if (spec.kind == ProblemKind::P1 || spec.kind == ProblemKind::P2) {
    const LinearProblem lp = transform_p2(spec);
    const LogGridFunction u = solve_linear_fd(lp, mesh);
    rep.solution = inverse_map_p2(u, spec.params.p, spec.params.eps);
  } else if (spec.kind == ProblemKind::P3) {
    const P3Transform tr = transform_p3(spec);
    const LogGridFunction u = solve_linear_fd(tr.lp, mesh);
    rep.solution = inverse_map_p3(
        u, *tr.map, std::min(spec.params.alpha, spec.params.beta),
        std::max(spec.params.alpha, spec.params.beta));
    pmap = tr.map;
  } else {
    raise(Errc::invalid_argument, "pipeline handles P1, P2 and P3");
  }

  rep.boundary_residuals = {
      std::fabs(rep.solution.values.front() - spec.params.alpha),
      std::fabs(rep.solution.values.back() - spec.params.beta)};

  if (oracle_exists(spec)) {
    std::function<double(double)> oracle;
    if (spec.kind == ProblemKind::P3 && pmap) {
      const double q = p3_constant_q(spec);
      const double a = spec.params.alpha, b = spec.params.beta;
      oracle = [pmap, q, a, b](double xi) {
        return oracle_p3_implicit(*pmap, q, a, b, xi);
      };
    } else {
      oracle = make_oracle(spec);
    }
    double err = 0.0;
    const auto x = mesh.nodes();
    for (std::size_t i = 0; i < x.size(); ++i)
      err = std::max(err, std::fabs(rep.solution.values[i] - oracle(x[i])));
    rep.max_error = err;
  }
  return rep;
}

SolveReport2D solve_elliptic_2d(const LinearProblem& lp, const Mesh& mesh_x1,
                                const Mesh& mesh_x2, const SolverConfig& cfg,
                                double omega, int threads) {
  if (lp.dim != 2)
    raise(Errc::unsupported_dimension, "solve_elliptic_2d handles dim = 2");
  if (!(lp.a2 > 0.0))
    raise(Errc::invalid_argument, "solve_elliptic_2d requires a2 > 0");
  if (!lp.a1.at(0).is_const || !lp.a1.at(1).is_const || !lp.a0.is_const)
    raise(Errc::invalid_argument,
          "the desk-scale 2D solver needs constant coefficients");
  if (!(omega > 0.0 && omega < 2.0))
    raise(Errc::invalid_argument, "SOR needs omega in (0, 2)");
  if (lp.a0.value > 0.0)
    raise(Errc::dominance_lost, "positive zeroth-order term (p*r > 0)");
  check_bc_range(lp);

  const auto xs = mesh_x1.nodes();
  const auto ys = mesh_x2.nodes();
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  const double m = rescale_exponent(lp.bc_left, lp.bc_right);

  // 1D restriction along x1 supplies the x2-face boundary profile.
  LinearProblem restricted;
  restricted.dim = 1;
  restricted.a2 = lp.a2;
  restricted.a1 = {lp.a1[0]};
  restricted.a0 = lp.a0;
  restricted.bc_left = lp.bc_left;
  restricted.bc_right = lp.bc_right;
  const LogGridFunction profile = solve_linear_fd(restricted, mesh_x1);

  std::vector<double> u(nx * ny, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return u[j * nx + i];
  };
  for (std::size_t i = 0; i < nx; ++i) {
    const double v = scaled_value(profile.values[i], m);
    at(i, 0) = v;
    at(i, ny - 1) = v;
  }
  for (std::size_t j = 0; j < ny; ++j) {
    at(0, j) = scaled_value(lp.bc_left, m);
    at(nx - 1, j) = scaled_value(lp.bc_right, m);
  }

  // Per-axis stencil coefficients (constant coefficients, tensor mesh).
  std::vector<double> cw(nx, 0.0), ce(nx, 0.0), ccx(nx, 0.0);
  std::vector<double> cs(ny, 0.0), cn(ny, 0.0), ccy(ny, 0.0);
  const double a1x = lp.a1[0].value, a1y = lp.a1[1].value;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    const double hm = xs[i] - xs[i - 1], hp = xs[i + 1] - xs[i];
    cw[i] = 2.0 * lp.a2 / (hm * (hm + hp));
    ce[i] = 2.0 * lp.a2 / (hp * (hm + hp));
    ccx[i] = -2.0 * lp.a2 / (hm * hp);
    if (a1x >= 0.0) {
      ce[i] += a1x / hp;
      ccx[i] -= a1x / hp;
    } else {
      cw[i] += -a1x / hm;
      ccx[i] += a1x / hm;
    }
  }
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const double hm = ys[j] - ys[j - 1], hp = ys[j + 1] - ys[j];
    cs[j] = 2.0 * lp.a2 / (hm * (hm + hp));
    cn[j] = 2.0 * lp.a2 / (hp * (hm + hp));
    ccy[j] = -2.0 * lp.a2 / (hm * hp);
    if (a1y >= 0.0) {
      cn[j] += a1y / hp;
      ccy[j] -= a1y / hp;
    } else {
      cs[j] += -a1y / hm;
      ccy[j] += a1y / hm;
    }
  }

  SolveReport2D rep;
  rep.status = SolveStatus::MaxIterations;

#ifdef _OPENMP
  const int want_threads = threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
#endif

  for (long sweep = 1; sweep <= cfg.relax_max_sweeps; ++sweep) {
    double max_diff = 0.0;
    double max_u = 0.0;
    for (int color = 0; color < 2; ++color) {
#ifdef _OPENMP
#pragma omp parallel for reduction(max : max_diff, max_u) \
    num_threads(want_threads) schedule(static)
#endif
      for (long jl = 1; jl < static_cast<long>(ny) - 1; ++jl) {
        const std::size_t j = static_cast<std::size_t>(jl);
        const std::size_t start = 1 + ((j + static_cast<std::size_t>(color)) & 1);
        for (std::size_t i = start; i + 1 < nx; i += 2) {
          const double diagc = ccx[i] + ccy[j] + lp.a0.value;
          const double rhs = cw[i] * at(i - 1, j) + ce[i] * at(i + 1, j) +
                             cs[j] * at(i, j - 1) + cn[j] * at(i, j + 1);
          const double unew = -rhs / diagc;
          const double old = at(i, j);
          const double next = old + omega * (unew - old);
          at(i, j) = next;
          max_diff = std::max(max_diff, std::fabs(next - old));
          max_u = std::max(max_u, std::fabs(next));
        }
      }
    }
    rep.sweeps = sweep;
    if (max_diff <= cfg.relax_tol * std::max(1.0, max_u)) {
      rep.status = SolveStatus::Converged;
      break;
    }
  }

  rep.solution.grid = {mesh_x1, mesh_x2};
  rep.solution.values.resize(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      rep.solution.values[j * nx + i] = unscaled(at(i, j), m);
  // Keep the exact log-domain data on the Dirichlet boundary.
  for (std::size_t j = 0; j < ny; ++j) {
    rep.solution.values[j * nx + 0] = lp.bc_left;
    rep.solution.values[j * nx + (nx - 1)] = lp.bc_right;
  }
  for (std::size_t i = 0; i < nx; ++i) {
    rep.solution.values[0 * nx + i] = profile.values[i];
    rep.solution.values[(ny - 1) * nx + i] = profile.values[i];
  }
  return rep;
}

std::vector<double> log_field_to_w(const LogField2D& f, double p, double eps) {
  if (p == 0.0) raise(Errc::illegal_sign, "inverse map requires p != 0");
  std::vector<double> w(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i].sign() != +1)
      throw Error(Errc::nonpositive_value,
                  "non-positive field value at node " + std::to_string(i), i);
    w[i] = (eps / p) * f.values[i].logmag();
  }
  return w;
}

}  // namespace hsb
