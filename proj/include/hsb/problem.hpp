#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsb/expr.hpp"
#include "hsb/mesh.hpp"

namespace hsb {

enum class ProblemKind { P1, P2, P3, P4, P5, P6, Baseline01 };

const char* kind_name(ProblemKind k);

/// Scalar data shared by the problem catalog: the small parameter eps,
/// the quadratic-term coefficient p, convective coefficient q, source
/// coefficient r, and the boundary values alpha (left) and beta (right).
struct ScalarParams {
  double eps = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

enum class LayerClass {
  LeftLayer,
  RightLayer,
  NoLayer,
  DegenerateConstant,
  DegenerateLinear,
};

const char* layer_class_name(LayerClass c);

/// Tagged description of one problem from the catalog. Function coefficients
/// live in `coeffs`, keyed by the names each variant requires:
///   P2: q(x), r(x);  P3: p(y), q(x);  P5: q1..q<dim>(x..), r(x..);
///   P6: p(w), q1..q<dim>(x.., w);  Baseline01: q(x, y).
struct ProblemSpec {
  ProblemKind kind = ProblemKind::P1;
  ScalarParams params;
  std::map<std::string, Expr> coeffs;
  int dim = 1;
};

/// Returns the spec unchanged iff all variant invariants hold
/// (required coefficients present, unused ones absent, sign constraints,
/// supported dimension). Idempotent.
ProblemSpec validate_spec(ProblemSpec spec);

/// Strict JSON round-trip; unknown fields are rejected.
ProblemSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ProblemSpec& spec);

enum class SolveStatus { Converged, MaxIterations, Diverged, Overflowed };

const char* status_name(SolveStatus s);

struct SolveReport {
  GridFunction solution;
  std::optional<double> max_error;  // absent when no oracle exists
  std::array<double, 2> boundary_residuals{0.0, 0.0};
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
};

// Convenience factories for in-code construction (validated).
ProblemSpec make_p1(double eps, double p, double q, double alpha, double beta);
ProblemSpec make_p2(double eps, double p, double alpha, double beta,
                    const std::string& q_expr, const std::string& r_expr);
ProblemSpec make_p3(double eps, double alpha, double beta,
                    const std::string& p_expr, const std::string& q_expr);
ProblemSpec make_p4(double eps, double alpha, double beta);
ProblemSpec make_p5(double eps, double p, double alpha, double beta, int dim,
                    const std::vector<std::string>& q_exprs,
                    const std::string& r_expr);
ProblemSpec make_p6(double eps, double alpha, double beta, int dim,
                    const std::string& p_expr,
                    const std::vector<std::string>& q_exprs);
ProblemSpec make_baseline01(double eps, double p, double alpha, double beta,
                            const std::string& q_expr);

}  // namespace hsb
