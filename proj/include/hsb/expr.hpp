#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hsb {

/// Parsed coefficient-function expression over a declared variable set.
///
/// Grammar: numbers, declared variables, the bindable constant `eps`,
/// unary functions exp/ln/sin/cos/erf/sqrt, unary minus, and + - * / ^
/// with conventional precedence (^ right-associative, binding tighter
/// than unary minus). Immutable and cheap to copy; eval is pure.
class Expr {
 public:
  Expr() = default;  // null expression; eval raises

  static Expr parse(std::string_view text, std::vector<std::string> variables);

  /// var_values follows the declared variable order; eps binds `eps`.
  double eval(std::span<const double> var_values, double eps) const;
  double eval1(double v, double eps) const {
    const double a[1] = {v};
    return eval(std::span<const double>(a, 1), eps);
  }

  /// Re-parseable rendering; parse(str()) reproduces the tree exactly.
  std::string str() const;

  bool valid() const { return root_ != nullptr; }
  /// True when no declared variable occurs in the tree (eps may occur).
  bool is_constant() const;
  const std::vector<std::string>& variables() const { return vars_; }

  bool same_tree(const Expr& other) const;

  struct Node;  // implementation detail, defined in expr.cpp

 private:
  std::shared_ptr<const Node> root_;
  std::vector<std::string> vars_;
};

}  // namespace hsb
