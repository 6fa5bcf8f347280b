#ifndef PDRICH_LOG_VALUE_HPP
#define PDRICH_LOG_VALUE_HPP

#include <cmath>
#include <limits>

namespace pdrich {

/// Nonnegative real stored as its natural logarithm. Exact zero is the
/// sentinel -inf, which annihilates products and is neutral for sums.
class LogValue {
 public:
  constexpr LogValue() : log_(-std::numeric_limits<double>::infinity()) {}

  static constexpr LogValue zero() { return LogValue(); }
  static constexpr LogValue one() { return from_log(0.0); }
  static constexpr LogValue from_log(double l) {
    LogValue v;
    v.log_ = l;
    return v;
  }
  // x must be >= 0
  static LogValue from_value(double x) {
    return x == 0.0 ? zero() : from_log(std::log(x));
  }

  constexpr double log() const { return log_; }
  double value() const { return std::exp(log_); }
  constexpr bool is_zero() const {
    return log_ == -std::numeric_limits<double>::infinity();
  }

  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    if (a.is_zero()) return zero();
    return from_log(a.log_ - b.log_);
  }
  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.log_ < b.log_) std::swap(a, b);
    return from_log(a.log_ + std::log1p(std::exp(b.log_ - a.log_)));
  }
  LogValue& operator+=(LogValue o) { return *this = *this + o; }
  LogValue& operator*=(LogValue o) { return *this = *this * o; }

  friend bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }
  friend bool operator<(LogValue a, LogValue b) { return a.log_ < b.log_; }

 private:
  double log_;
};

/// Real number with a sign carried separately from a log-magnitude.
/// sign is -1, 0 or +1; sign 0 implies a zero magnitude.
struct SignedLogValue {
  LogValue magnitude;
  int sign = 0;

  static SignedLogValue from_value(double x) {
    return {LogValue::from_value(std::fabs(x)), x > 0 ? 1 : (x < 0 ? -1 : 0)};
  }
  double value() const { return sign * magnitude.value(); }

  friend SignedLogValue operator*(SignedLogValue a, SignedLogValue b) {
    int s = a.sign * b.sign;
    return {s == 0 ? LogValue::zero() : a.magnitude * b.magnitude, s};
  }
  friend SignedLogValue operator*(SignedLogValue a, LogValue b) {
    if (b.is_zero()) return {};
    return {a.magnitude * b, a.sign};
  }
  friend SignedLogValue operator+(SignedLogValue a, SignedLogValue b);
};

}  // namespace pdrich

#endif
