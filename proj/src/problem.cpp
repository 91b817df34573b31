#include "hsb/problem.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hsb/error.hpp"

namespace hsb {

const char* kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::P1: return "P1";
    case ProblemKind::P2: return "P2";
    case ProblemKind::P3: return "P3";
    case ProblemKind::P4: return "P4";
    case ProblemKind::P5: return "P5";
    case ProblemKind::P6: return "P6";
    case ProblemKind::Baseline01: return "Baseline01";
  }
  return "?";
}

const char* layer_class_name(LayerClass c) {
  switch (c) {
    case LayerClass::LeftLayer: return "LeftLayer";
    case LayerClass::RightLayer: return "RightLayer";
    case LayerClass::NoLayer: return "NoLayer";
    case LayerClass::DegenerateConstant: return "DegenerateConstant";
    case LayerClass::DegenerateLinear: return "DegenerateLinear";
  }
  return "?";
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::Overflowed: return "Overflowed";
  }
  return "?";
}

namespace {

std::vector<std::string> space_vars(int dim) {
  if (dim == 1) return {"x1"};
  return {"x1", "x2"};
}

struct CoeffRule {
  std::string name;
  std::vector<std::string> vars;
};

// Required coefficient map per variant; unused names must be absent.
std::vector<CoeffRule> coeff_rules(ProblemKind kind, int dim) {
  switch (kind) {
    case ProblemKind::P1:
    case ProblemKind::P4:
      return {};
    case ProblemKind::P2:
      return {{"q", {"x"}}, {"r", {"x"}}};
    case ProblemKind::P3:
      return {{"p", {"y"}}, {"q", {"x"}}};
    case ProblemKind::P5: {
      std::vector<CoeffRule> rules;
      const auto sv = space_vars(dim);
      for (int i = 1; i <= dim; ++i)
        rules.push_back({"q" + std::to_string(i), sv});
      rules.push_back({"r", sv});
      return rules;
    }
    case ProblemKind::P6: {
      std::vector<CoeffRule> rules;
      auto sv = space_vars(dim);
      rules.push_back({"p", {"w"}});
      sv.push_back("w");
      for (int i = 1; i <= dim; ++i)
        rules.push_back({"q" + std::to_string(i), sv});
      return rules;
    }
    case ProblemKind::Baseline01:
      return {{"q", {"x", "y"}}};
  }
  return {};
}

// Scalar fields each variant consumes; the rest must stay at zero/default.
bool uses_scalar_p(ProblemKind k) {
  return k == ProblemKind::P1 || k == ProblemKind::P2 || k == ProblemKind::P5 ||
         k == ProblemKind::Baseline01;
}
bool uses_scalar_q(ProblemKind k) { return k == ProblemKind::P1; }

}  // namespace

ProblemSpec validate_spec(ProblemSpec spec) {
  const ProblemKind k = spec.kind;

  if (!(spec.params.eps > 0.0))
    raise(Errc::illegal_sign, "eps must be positive");
  if (!std::isfinite(spec.params.alpha) || !std::isfinite(spec.params.beta))
    raise(Errc::invalid_argument, "boundary values must be finite");

  const int max_dim = (k == ProblemKind::P5 || k == ProblemKind::P6) ? 2 : 1;
  if (spec.dim < 1 || spec.dim > max_dim)
    raise(Errc::unsupported_dimension,
          std::string("dim out of range for ") + kind_name(k));

  if (k == ProblemKind::P1) {
    if (!(spec.params.p > 0.0))
      raise(Errc::illegal_sign, "P1 requires p > 0");
    if (!(spec.params.q > 0.0))
      raise(Errc::illegal_sign, "P1 requires q > 0");
    if (spec.params.r != 0.0)
      raise(Errc::illegal_sign, "P1 has no source term; r must be 0");
  } else if (uses_scalar_p(k)) {
    if (spec.params.p == 0.0 || !std::isfinite(spec.params.p))
      raise(Errc::illegal_sign,
            std::string(kind_name(k)) + " requires a nonzero finite p");
  }

  const auto rules = coeff_rules(k, spec.dim);
  for (const auto& rule : rules) {
    auto it = spec.coeffs.find(rule.name);
    if (it == spec.coeffs.end() || !it->second.valid())
      raise(Errc::missing_coefficient,
            std::string(kind_name(k)) + " requires coefficient '" + rule.name +
                "'");
    // The parsed expression must be declared over exactly the expected set.
    if (it->second.variables() != rule.vars)
      raise(Errc::invalid_argument,
            "coefficient '" + rule.name + "' must be declared over its " +
                "variant's variable set");
  }
  for (const auto& [name, expr] : spec.coeffs) {
    bool known = false;
    for (const auto& rule : rules) known = known || rule.name == name;
    if (!known)
      raise(Errc::invalid_argument,
            "coefficient '" + name + "' is not used by " + kind_name(k));
  }

  return spec;  // std::map keeps coefficients in normalized (sorted) order
}

namespace {

using nlohmann::json;

ProblemKind kind_from_string(const std::string& s) {
  for (ProblemKind k :
       {ProblemKind::P1, ProblemKind::P2, ProblemKind::P3, ProblemKind::P4,
        ProblemKind::P5, ProblemKind::P6, ProblemKind::Baseline01})
    if (s == kind_name(k)) return k;
  raise(Errc::json_error, "unknown problem kind '" + s + "'");
}

double require_number(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end())
    raise(Errc::json_error, std::string("missing field '") + field + "'");
  if (!it->is_number())
    raise(Errc::json_error, std::string("field '") + field + "' must be a number");
  return it->get<double>();
}

}  // namespace

ProblemSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::json_error, std::string("spec JSON: ") + e.what());
  }
  if (!j.is_object()) raise(Errc::json_error, "spec JSON must be an object");

  auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string())
    raise(Errc::json_error, "spec JSON needs a string 'kind'");
  ProblemSpec spec;
  spec.kind = kind_from_string(kind_it->get<std::string>());

  spec.dim = 1;
  if (auto it = j.find("dim"); it != j.end()) {
    if (!it->is_number_integer())
      raise(Errc::json_error, "'dim' must be an integer");
    spec.dim = it->get<int>();
  }

  spec.params.eps = require_number(j, "eps");
  spec.params.alpha = require_number(j, "alpha");
  spec.params.beta = require_number(j, "beta");

  const bool wants_p = uses_scalar_p(spec.kind);
  const bool wants_q = uses_scalar_q(spec.kind);
  std::set<std::string> allowed = {"kind", "eps", "alpha", "beta"};
  if (wants_p) allowed.insert("p");
  if (wants_q) allowed.insert("q");
  if (spec.kind == ProblemKind::P1) allowed.insert("r");  // optional, must be 0
  if (spec.kind == ProblemKind::P5 || spec.kind == ProblemKind::P6)
    allowed.insert("dim");
  if (!coeff_rules(spec.kind, spec.dim).empty()) allowed.insert("coeffs");

  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      raise(Errc::json_error,
            "unknown field '" + it.key() + "' for kind " + kind_name(spec.kind));

  if (wants_p) spec.params.p = require_number(j, "p");
  if (wants_q) spec.params.q = require_number(j, "q");
  if (auto it = j.find("r"); it != j.end()) {
    if (!it->is_number()) raise(Errc::json_error, "'r' must be a number");
    spec.params.r = it->get<double>();
  }

  const auto rules = coeff_rules(spec.kind, spec.dim);
  if (!rules.empty()) {
    auto cit = j.find("coeffs");
    if (cit == j.end() || !cit->is_object())
      raise(Errc::missing_coefficient,
            std::string(kind_name(spec.kind)) + " needs a 'coeffs' object");
    for (auto it = cit->begin(); it != cit->end(); ++it) {
      const CoeffRule* rule = nullptr;
      for (const auto& r : rules)
        if (r.name == it.key()) rule = &r;
      if (rule == nullptr)
        raise(Errc::json_error, "coefficient '" + it.key() + "' is not used by " +
                                    kind_name(spec.kind));
      if (!it->is_string())
        raise(Errc::json_error,
              "coefficient '" + it.key() + "' must be an expression string");
      spec.coeffs.emplace(it.key(),
                          Expr::parse(it->get<std::string>(), rule->vars));
    }
  }

  return validate_spec(std::move(spec));
}

std::string spec_to_json(const ProblemSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  j["eps"] = spec.params.eps;
  j["alpha"] = spec.params.alpha;
  j["beta"] = spec.params.beta;
  if (uses_scalar_p(spec.kind)) j["p"] = spec.params.p;
  if (uses_scalar_q(spec.kind)) j["q"] = spec.params.q;
  if (spec.kind == ProblemKind::P5 || spec.kind == ProblemKind::P6)
    j["dim"] = spec.dim;
  if (!spec.coeffs.empty()) {
    json c = json::object();
    for (const auto& [name, expr] : spec.coeffs) c[name] = expr.str();
    j["coeffs"] = c;
  }
  return j.dump();
}

namespace {

ProblemSpec finish(ProblemSpec spec) { return validate_spec(std::move(spec)); }

}  // namespace

ProblemSpec make_p1(double eps, double p, double q, double alpha, double beta) {
  ProblemSpec s;
  s.kind = ProblemKind::P1;
  s.params = {eps, p, q, 0.0, alpha, beta};
  return finish(std::move(s));
}

ProblemSpec make_p2(double eps, double p, double alpha, double beta,
                    const std::string& q_expr, const std::string& r_expr) {
  ProblemSpec s;
  s.kind = ProblemKind::P2;
  s.params = {eps, p, 0.0, 0.0, alpha, beta};
  s.coeffs.emplace("q", Expr::parse(q_expr, {"x"}));
  s.coeffs.emplace("r", Expr::parse(r_expr, {"x"}));
  return finish(std::move(s));
}

ProblemSpec make_p3(double eps, double alpha, double beta,
                    const std::string& p_expr, const std::string& q_expr) {
  ProblemSpec s;
  s.kind = ProblemKind::P3;
  s.params = {eps, 0.0, 0.0, 0.0, alpha, beta};
  s.coeffs.emplace("p", Expr::parse(p_expr, {"y"}));
  s.coeffs.emplace("q", Expr::parse(q_expr, {"x"}));
  return finish(std::move(s));
}

ProblemSpec make_p4(double eps, double alpha, double beta) {
  ProblemSpec s;
  s.kind = ProblemKind::P4;
  s.params = {eps, 0.0, 0.0, 0.0, alpha, beta};
  return finish(std::move(s));
}

ProblemSpec make_p5(double eps, double p, double alpha, double beta, int dim,
                    const std::vector<std::string>& q_exprs,
                    const std::string& r_expr) {
  ProblemSpec s;
  s.kind = ProblemKind::P5;
  s.params = {eps, p, 0.0, 0.0, alpha, beta};
  s.dim = dim;
  const auto sv = space_vars(dim);
  for (std::size_t i = 0; i < q_exprs.size(); ++i)
    s.coeffs.emplace("q" + std::to_string(i + 1), Expr::parse(q_exprs[i], sv));
  s.coeffs.emplace("r", Expr::parse(r_expr, sv));
  return finish(std::move(s));
}

ProblemSpec make_p6(double eps, double alpha, double beta, int dim,
                    const std::string& p_expr,
                    const std::vector<std::string>& q_exprs) {
  ProblemSpec s;
  s.kind = ProblemKind::P6;
  s.params = {eps, 0.0, 0.0, 0.0, alpha, beta};
  s.dim = dim;
  auto sv = space_vars(dim);
  sv.push_back("w");
  s.coeffs.emplace("p", Expr::parse(p_expr, {"w"}));
  for (std::size_t i = 0; i < q_exprs.size(); ++i)
    s.coeffs.emplace("q" + std::to_string(i + 1), Expr::parse(q_exprs[i], sv));
  return finish(std::move(s));
}

ProblemSpec make_baseline01(double eps, double p, double alpha, double beta,
                            const std::string& q_expr) {
  ProblemSpec s;
  s.kind = ProblemKind::Baseline01;
  s.params = {eps, p, 0.0, 0.0, alpha, beta};
  s.coeffs.emplace("q", Expr::parse(q_expr, {"x", "y"}));
  return finish(std::move(s));
}

}  // namespace hsb
