#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hsb {

/// Failure categories used across the library. Input-side categories map to
/// CLI exit code 2, numerical ones to exit code 3.
enum class Errc {
  // spec and input validation
  missing_coefficient,
  illegal_sign,
  unsupported_dimension,
  invalid_argument,
  json_error,
  io_error,
  // expression parsing / evaluation
  syntax_error,
  unknown_identifier,
  eval_error,
  // log-domain arithmetic
  divide_by_zero,
  ln_of_nonpositive,
  nonpositive_argument,
  nonpositive_value,
  // quadrature
  nonfinite_exponent,
  quadrature_failure,
  // oracles and solvers
  complex_roots,
  root_not_bracketed,
  zero_pivot,
  dominance_lost,
  range_exceeded,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_coefficient: return "MissingCoefficient";
    case Errc::illegal_sign: return "IllegalSign";
    case Errc::unsupported_dimension: return "UnsupportedDimension";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::json_error: return "JsonError";
    case Errc::io_error: return "IoError";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_identifier: return "UnknownIdentifier";
    case Errc::eval_error: return "EvalError";
    case Errc::divide_by_zero: return "DivideByZero";
    case Errc::ln_of_nonpositive: return "LnOfNonpositive";
    case Errc::nonpositive_argument: return "NonpositiveArgument";
    case Errc::nonpositive_value: return "NonpositiveValue";
    case Errc::nonfinite_exponent: return "NonFiniteExponent";
    case Errc::quadrature_failure: return "QuadratureFailure";
    case Errc::complex_roots: return "ComplexRoots";
    case Errc::root_not_bracketed: return "RootNotBracketed";
    case Errc::zero_pivot: return "ZeroPivot";
    case Errc::dominance_lost: return "DominanceLost";
    case Errc::range_exceeded: return "RangeExceeded";
  }
  return "Unknown";
}

/// True for errors caused by bad user input rather than numerical failure.
constexpr bool is_input_error(Errc c) {
  switch (c) {
    case Errc::missing_coefficient:
    case Errc::illegal_sign:
    case Errc::unsupported_dimension:
    case Errc::invalid_argument:
    case Errc::json_error:
    case Errc::io_error:
    case Errc::syntax_error:
    case Errc::unknown_identifier:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  /// `where` is a byte offset (parser errors) or a node index (grid errors).
  Error(Errc code, std::string msg, std::size_t where)
      : std::runtime_error(std::move(msg)),
        code_(code),
        where_(where),
        has_where_(true) {}

  Errc code() const noexcept { return code_; }
  bool has_location() const noexcept { return has_where_; }
  std::size_t location() const noexcept { return where_; }

 private:
  Errc code_;
  std::size_t where_ = 0;
  bool has_where_ = false;
};

[[noreturn]] inline void raise(Errc code, std::string msg) {
  throw Error(code, std::move(msg));
}

[[noreturn]] inline void raise_at(Errc code, std::string msg, std::size_t where) {
  throw Error(code, std::move(msg), where);
}

}  // namespace hsb
