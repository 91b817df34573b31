#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <string>

#include "hsb/error.hpp"

namespace hsb {

/// Signed log-domain real number: value = sign * exp(logmag).
///
/// This is the carrier for every quantity of the form e^{c/eps} that would
/// overflow a double long before eps reaches the regimes of interest.
/// sign == 0 represents exact zero and logmag is meaningless in that case;
/// otherwise logmag is finite.
class LogReal {
 public:
  constexpr LogReal() = default;  // exact zero

  static LogReal from_real(double v) {
    if (std::isnan(v)) raise(Errc::invalid_argument, "LogReal from NaN");
    if (v == 0.0) return LogReal{};
    if (std::isinf(v)) raise(Errc::invalid_argument, "LogReal from infinity");
    return LogReal(v > 0.0 ? +1 : -1, std::log(std::fabs(v)));
  }

  /// Builds sign * e^{logmag}. A logmag of -inf collapses to exact zero.
  static LogReal from_log(int sign, double logmag) {
    if (sign == 0) return LogReal{};
    if (sign != +1 && sign != -1)
      raise(Errc::invalid_argument, "LogReal sign must be -1, 0 or +1");
    if (std::isnan(logmag)) raise(Errc::invalid_argument, "LogReal from NaN logmag");
    if (logmag == -std::numeric_limits<double>::infinity()) return LogReal{};
    if (std::isinf(logmag)) raise(Errc::invalid_argument, "LogReal from +inf logmag");
    return LogReal(sign, logmag);
  }

  /// e^{t} as a LogReal.
  static LogReal exp_of(double t) { return from_log(+1, t); }
  static LogReal one() { return LogReal(+1, 0.0); }

  int sign() const { return sign_; }
  double logmag() const { return logmag_; }
  bool is_zero() const { return sign_ == 0; }

  /// May overflow to +-inf or underflow to 0 when the value leaves double range.
  double to_real() const {
    if (sign_ == 0) return 0.0;
    return static_cast<double>(sign_) * std::exp(logmag_);
  }

  LogReal negated() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  LogReal abs() const {
    LogReal r = *this;
    if (r.sign_ != 0) r.sign_ = +1;
    return r;
  }

  friend bool operator==(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.logmag_ == b.logmag_;
  }

 private:
  constexpr LogReal(int s, double lm) : sign_(s), logmag_(lm) {}
  int sign_ = 0;
  double logmag_ = 0.0;
};

/// Signed log-sum-exp of two operands. Exact cancellation to zero when the
/// magnitudes coincide and the signs are opposite.
inline LogReal lr_add(LogReal a, LogReal b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (b.logmag() > a.logmag()) std::swap(a, b);
  const double d = b.logmag() - a.logmag();  // <= 0
  if (a.sign() == b.sign())
    return LogReal::from_log(a.sign(), a.logmag() + std::log1p(std::exp(d)));
  if (d == 0.0) return LogReal{};
  // |1 - e^d| via expm1 keeps full precision when d is tiny.
  return LogReal::from_log(a.sign(), a.logmag() + std::log(-std::expm1(d)));
}

inline LogReal lr_sub(LogReal a, LogReal b) { return lr_add(a, b.negated()); }

inline LogReal lr_mul(LogReal a, LogReal b) {
  if (a.is_zero() || b.is_zero()) return LogReal{};
  return LogReal::from_log(a.sign() * b.sign(), a.logmag() + b.logmag());
}

inline LogReal lr_div(LogReal a, LogReal b) {
  if (b.is_zero()) raise(Errc::divide_by_zero, "LogReal division by zero");
  if (a.is_zero()) return LogReal{};
  return LogReal::from_log(a.sign() * b.sign(), a.logmag() - b.logmag());
}

/// Natural log of a positive LogReal, i.e. its logmag.
inline double lr_ln(LogReal a) {
  if (a.sign() != +1)
    raise(Errc::ln_of_nonpositive, "lr_ln requires a positive value");
  return a.logmag();
}

/// Signed log-sum-exp of a term list: m + ln|sum_i s_i e^{l_i - m}| with
/// m = max logmag. Returns exact zero when the rescaled sum cancels to zero.
inline LogReal lr_sum(std::span<const LogReal> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (const LogReal& t : terms)
    if (!t.is_zero() && t.logmag() > m) m = t.logmag();
  if (std::isinf(m)) return LogReal{};  // all terms zero (or empty)
  double s = 0.0;
  for (const LogReal& t : terms)
    if (!t.is_zero()) s += static_cast<double>(t.sign()) * std::exp(t.logmag() - m);
  if (s == 0.0) return LogReal{};
  return LogReal::from_log(s > 0.0 ? +1 : -1, m + std::log(std::fabs(s)));
}

/// Sign of a - b as real values.
inline int lr_cmp(LogReal a, LogReal b) {
  if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : +1;
  if (a.sign() == 0) return 0;
  if (a.logmag() == b.logmag()) return 0;
  const bool amag_bigger = a.logmag() > b.logmag();
  if (a.sign() > 0) return amag_bigger ? +1 : -1;
  return amag_bigger ? -1 : +1;
}

inline LogReal operator+(LogReal a, LogReal b) { return lr_add(a, b); }
inline LogReal operator-(LogReal a, LogReal b) { return lr_sub(a, b); }
inline LogReal operator-(LogReal a) { return a.negated(); }
inline LogReal operator*(LogReal a, LogReal b) { return lr_mul(a, b); }
inline LogReal operator/(LogReal a, LogReal b) { return lr_div(a, b); }

}  // namespace hsb
