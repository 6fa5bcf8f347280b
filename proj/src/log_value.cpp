#include "pdrich/log_value.hpp"

#include <utility>

namespace pdrich {

SignedLogValue operator+(SignedLogValue a, SignedLogValue b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.sign == b.sign) return {a.magnitude + b.magnitude, a.sign};
  if (a.magnitude < b.magnitude) std::swap(a, b);
  double d = b.magnitude.log() - a.magnitude.log();
  if (d == 0.0) return {};
  // |a| > |b|: |a| - |b| = |a| (1 - e^d)
  return {LogValue::from_log(a.magnitude.log() + std::log(-std::expm1(d))), a.sign};
}

}  // namespace pdrich
