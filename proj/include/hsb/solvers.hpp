#pragma once

#include <vector>

#include "hsb/linearize.hpp"
#include "hsb/mesh.hpp"
#include "hsb/problem.hpp"

namespace hsb {

struct Tridiag {
  std::vector<double> sub;    // length n-1
  std::vector<double> diag;   // length n
  std::vector<double> super;  // length n-1
  std::vector<double> rhs;    // length n
};

/// Forward elimination / back substitution. Raises ZeroPivot on a vanishing
/// pivot (cannot happen for the diagonally dominant systems assembled here).
std::vector<double> thomas_solve(Tridiag t);

struct SolverConfig {
  double newton_tol = 1e-10;   // also the boundary-residual tolerance
  int newton_max_iter = 100;
  double relax_tol = 1e-10;
  long relax_max_sweeps = 1000000;
  double damping = 1.0;  // initial Newton step scale, in (0, 1]
};

/// Upwind finite differences for the 1D transformed problem on a possibly
/// nonuniform mesh: standard 3-point stencil for the diffusion term and
/// one-sided convection differencing chosen per node so every off-diagonal
/// entry stays nonnegative (M-matrix). The solve runs on the rescaled
/// variable ubar = u e^{-m}, m = max boundary logmag, which is exact for the
/// homogeneous equation; boundary nodes of the output carry the exact
/// log-domain boundary values.
LogGridFunction solve_linear_fd(const LinearProblem& lp, const Mesh& mesh);

/// Damped Newton on the centered-difference discretization of the
/// untransformed nonlinear equation (kinds P1, P2, P3, Baseline01), started
/// from the linear interpolant of the boundary data. Failure is reported as
/// data in the returned status, never thrown.
SolveReport solve_direct_newton(const ProblemSpec& spec, const Mesh& mesh,
                                const SolverConfig& cfg = {});

/// Linearize -> upwind FD -> inverse map, with the max-norm error against
/// the closed-form oracle attached when one exists. The degenerate parameter
/// lines short-circuit to their exact constant/linear solutions.
SolveReport solve_pipeline(const ProblemSpec& spec, const Mesh& mesh);

struct SolveReport2D {
  LogField2D solution;
  long sweeps = 0;
  SolveStatus status = SolveStatus::Converged;
};

/// Five-point Laplacian plus upwinded convection on a tensor grid of the
/// unit square, constant coefficients only. Dirichlet data: the log-domain
/// boundary values on the x1-faces and the 1D restriction profile on the
/// x2-faces. Red-black SOR sweeps until the relative update drops below
/// relax_tol; identical results for any thread count.
SolveReport2D solve_elliptic_2d(const LinearProblem& lp, const Mesh& mesh_x1,
                                const Mesh& mesh_x2,
                                const SolverConfig& cfg = {},
                                double omega = 1.0, int threads = 0);

/// w = (eps/p) ln u per node; raises NonpositiveValue (with the flattened
/// node index) when a node is not strictly positive.
std::vector<double> log_field_to_w(const LogField2D& f, double p, double eps);

}  // namespace hsb
