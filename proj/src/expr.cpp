#include "hsb/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "hsb/error.hpp"
#include "hsb/special.hpp"

namespace hsb {

namespace {

enum class UnaryFn { Neg, Exp, Ln, Sin, Cos, Erf, Sqrt };
enum class BinaryFn { Add, Sub, Mul, Div, Pow };

constexpr std::array<std::pair<std::string_view, UnaryFn>, 6> kFunctions = {{
    {"exp", UnaryFn::Exp},
    {"ln", UnaryFn::Ln},
    {"sin", UnaryFn::Sin},
    {"cos", UnaryFn::Cos},
    {"erf", UnaryFn::Erf},
    {"sqrt", UnaryFn::Sqrt},
}};

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Neg: return "-";
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Ln: return "ln";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Erf: return "erf";
    case UnaryFn::Sqrt: return "sqrt";
  }
  return "?";
}

char op_char(BinaryFn f) {
  switch (f) {
    case BinaryFn::Add: return '+';
    case BinaryFn::Sub: return '-';
    case BinaryFn::Mul: return '*';
    case BinaryFn::Div: return '/';
    case BinaryFn::Pow: return '^';
  }
  return '?';
}

int precedence(BinaryFn f) {
  switch (f) {
    case BinaryFn::Add:
    case BinaryFn::Sub: return 1;
    case BinaryFn::Mul:
    case BinaryFn::Div: return 2;
    case BinaryFn::Pow: return 4;
  }
  return 0;
}
constexpr int kNegPrecedence = 3;

}  // namespace

struct Expr::Node {
  enum class Kind { Number, Variable, Eps, Unary, Binary };
  Kind kind;
  double number = 0.0;
  int var_index = -1;
  std::string var_name;
  UnaryFn ufn = UnaryFn::Neg;
  BinaryFn bfn = BinaryFn::Add;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->number = v;
  return n;
}

NodePtr make_unary(UnaryFn f, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->ufn = f;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(BinaryFn f, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bfn = f;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      raise_at(Errc::syntax_error, "unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = make_binary(BinaryFn::Add, lhs, parse_term());
      else if (eat('-'))
        lhs = make_binary(BinaryFn::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = make_binary(BinaryFn::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = make_binary(BinaryFn::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_unary(UnaryFn::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) return make_binary(BinaryFn::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      raise_at(Errc::syntax_error, "unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!eat(')'))
        raise_at(Errc::syntax_error, "expected ')'", pos_);
      return inner;
    }
    raise_at(Errc::syntax_error, std::string("unexpected character '") + c + "'",
             pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      raise_at(Errc::syntax_error, "malformed number literal", start);
    return make_number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        if (!eat('('))
          raise_at(Errc::syntax_error,
                   "expected '(' after function name", pos_);
        NodePtr arg = parse_expr();
        if (!eat(')')) raise_at(Errc::syntax_error, "expected ')'", pos_);
        return make_unary(fn, std::move(arg));
      }
    }

    if (name == "eps") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Eps;
      return n;
    }

    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (name == vars_[i]) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->var_index = static_cast<int>(i);
        n->var_name = vars_[i];
        return n;
      }
    }
    raise_at(Errc::unknown_identifier,
             "unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, std::span<const double> vals, double eps) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.number;
    case Node::Kind::Eps:
      return eps;
    case Node::Kind::Variable:
      if (n.var_index < 0 || static_cast<std::size_t>(n.var_index) >= vals.size())
        raise(Errc::eval_error, "missing binding for variable " + n.var_name);
      return vals[static_cast<std::size_t>(n.var_index)];
    case Node::Kind::Unary: {
      const double a = eval_node(*n.lhs, vals, eps);
      double r;
      switch (n.ufn) {
        case UnaryFn::Neg: r = -a; break;
        case UnaryFn::Exp: r = std::exp(a); break;
        case UnaryFn::Ln:
          if (!(a > 0.0)) raise(Errc::eval_error, "ln of non-positive value");
          r = std::log(a);
          break;
        case UnaryFn::Sin: r = std::sin(a); break;
        case UnaryFn::Cos: r = std::cos(a); break;
        case UnaryFn::Erf: r = hsb::erf(a); break;
        case UnaryFn::Sqrt:
          if (a < 0.0) raise(Errc::eval_error, "sqrt of negative value");
          r = std::sqrt(a);
          break;
      }
      if (!std::isfinite(r))
        raise(Errc::eval_error, std::string("non-finite result of ") + fn_name(n.ufn));
      return r;
    }
    case Node::Kind::Binary: {
      const double a = eval_node(*n.lhs, vals, eps);
      const double b = eval_node(*n.rhs, vals, eps);
      double r;
      switch (n.bfn) {
        case BinaryFn::Add: r = a + b; break;
        case BinaryFn::Sub: r = a - b; break;
        case BinaryFn::Mul: r = a * b; break;
        case BinaryFn::Div:
          if (b == 0.0) raise(Errc::eval_error, "division by zero");
          r = a / b;
          break;
        case BinaryFn::Pow:
          if (a < 0.0 && b != std::floor(b))
            raise(Errc::eval_error,
                  "negative base with non-integer exponent");
          if (a == 0.0 && b < 0.0)
            raise(Errc::eval_error, "zero base with negative exponent");
          r = std::pow(a, b);
          break;
      }
      if (!std::isfinite(r))
        raise(Errc::eval_error,
              std::string("non-finite result of operator ") + op_char(n.bfn));
      return r;
    }
  }
  raise(Errc::eval_error, "corrupt expression node");
}

bool depends_on_variable(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number:
    case Node::Kind::Eps:
      return false;
    case Node::Kind::Variable:
      return true;
    case Node::Kind::Unary:
      return depends_on_variable(*n.lhs);
    case Node::Kind::Binary:
      return depends_on_variable(*n.lhs) || depends_on_variable(*n.rhs);
  }
  return false;
}

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Rendering precedence: a child is parenthesized whenever re-parsing would
// otherwise attach it differently.
void print_node(const Node& n, std::string& out);

void print_child(const Node& child, std::string& out, bool need_parens) {
  if (need_parens) out += '(';
  print_node(child, out);
  if (need_parens) out += ')';
}

int node_precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number:
    case Node::Kind::Variable:
    case Node::Kind::Eps:
      return 100;
    case Node::Kind::Unary:
      return n.ufn == UnaryFn::Neg ? kNegPrecedence : 100;
    case Node::Kind::Binary:
      return precedence(n.bfn);
  }
  return 100;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number:
      out += format_number(n.number);
      return;
    case Node::Kind::Eps:
      out += "eps";
      return;
    case Node::Kind::Variable:
      out += n.var_name;
      return;
    case Node::Kind::Unary:
      if (n.ufn == UnaryFn::Neg) {
        out += '-';
        print_child(*n.lhs, out, node_precedence(*n.lhs) < kNegPrecedence);
      } else {
        out += fn_name(n.ufn);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
      }
      return;
    case Node::Kind::Binary: {
      const int p = precedence(n.bfn);
      if (n.bfn == BinaryFn::Pow) {
        // right-associative; exponent re-parses as a unary production
        print_child(*n.lhs, out, node_precedence(*n.lhs) <= p);
        out += '^';
        print_child(*n.rhs, out, node_precedence(*n.rhs) < kNegPrecedence);
      } else {
        print_child(*n.lhs, out, node_precedence(*n.lhs) < p);
        out += op_char(n.bfn);
        print_child(*n.rhs, out, node_precedence(*n.rhs) <= p);
      }
      return;
    }
  }
}

bool same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Number:
      return a.number == b.number;
    case Node::Kind::Eps:
      return true;
    case Node::Kind::Variable:
      return a.var_index == b.var_index && a.var_name == b.var_name;
    case Node::Kind::Unary:
      return a.ufn == b.ufn && same_node(*a.lhs, *b.lhs);
    case Node::Kind::Binary:
      return a.bfn == b.bfn && same_node(*a.lhs, *b.lhs) &&
             same_node(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace

Expr Expr::parse(std::string_view text, std::vector<std::string> variables) {
  for (const auto& v : variables) {
    if (v == "eps")
      raise(Errc::invalid_argument, "'eps' is reserved and cannot be a variable");
    for (const auto& [fname, fn] : kFunctions)
      if (v == fname)
        raise(Errc::invalid_argument,
              "variable name collides with function '" + std::string(fname) + "'");
  }
  Expr e;
  e.vars_ = std::move(variables);
  e.root_ = Parser(text, e.vars_).run();
  return e;
}

double Expr::eval(std::span<const double> var_values, double eps) const {
  if (!root_) raise(Errc::eval_error, "evaluating a null expression");
  return eval_node(*root_, var_values, eps);
}

std::string Expr::str() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::is_constant() const {
  if (!root_) return true;
  return !depends_on_variable(*root_);
}

bool Expr::same_tree(const Expr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return same_node(*root_, *other.root_);
}

}  // namespace hsb
