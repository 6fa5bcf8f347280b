#ifndef PDRICH_STIRLING_HPP
#define PDRICH_STIRLING_HPP

// Rising factorials and the Stirling-type triangles used by the partition
// formulas: generalized Stirling numbers of the first kind S(n,k; alpha),
// their non-central version with shift r, and the non-central Stirling
// numbers of the second kind with shift gamma. All tables are signless and
// stored in log space.

#include <cstddef>
#include <span>
#include <vector>

#include "pdrich/errors.hpp"
#include "pdrich/log_value.hpp"

namespace pdrich {

/// x (x+1) ... (x+b-1); b = 0 gives 1. Any real x.
SignedLogValue rising_factorial(double x, long b);

/// x (x+a) (x+2a) ... (x+(s-1)a); s = 0 gives 1.
SignedLogValue gen_rising_factorial(double x, long s, double alpha);

/// log (x)_b for x > 0.
double log_rising_factorial(double x, long b);

/// log [(a)_m / (b)_m] for a, b > 0, accurate when the ratio is near 1.
double log_rising_ratio(double a, double b, long m);

/// log of x (x+alpha) ... (x+(s-1)alpha) for x > 0, alpha > 0.
double log_gen_rising_factorial(double x, long s, double alpha);

/// Cumulative logs: out[j] = log (x)_j for j = 0..len. x > 0.
std::vector<double> log_rising_prefix(double x, long len);

/// Cumulative logs: out[j] = log (x)_{j, step alpha} for j = 0..len. x > 0.
std::vector<double> log_gen_rising_prefix(double x, long len, double alpha);

enum class StirlingFamily { FirstKind, NoncentralFirstKind, NoncentralSecondKind };

/// Dense, immutable triangle of log-scale entries indexed (n, k), 0 <= k <= n.
class LogTable {
 public:
  LogTable(StirlingFamily family, long nmax, double alpha, double shift);

  StirlingFamily family() const { return family_; }
  long nmax() const { return nmax_; }
  double alpha() const { return alpha_; }
  // r for the non-central first kind, gamma for the second kind, 0 otherwise
  double shift() const { return shift_; }

  LogValue at(long n, long k) const {
    if (n < 0 || n > nmax_ || k < 0 || k > n) return LogValue::zero();
    return cells_[index(n, k)];
  }
  std::span<const LogValue> row(long n) const {
    return {cells_.data() + index(n, 0), static_cast<std::size_t>(n + 1)};
  }
  std::span<LogValue> mutable_row(long n) {
    return {cells_.data() + index(n, 0), static_cast<std::size_t>(n + 1)};
  }

 private:
  static std::size_t index(long n, long k) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2 +
           static_cast<std::size_t>(k);
  }

  StirlingFamily family_;
  long nmax_;
  double alpha_;
  double shift_;
  std::vector<LogValue> cells_;
};

/// S(n+1,k) = S(n,k-1) + (n - k alpha) S(n,k), S(0,0) = 1. alpha in (0,1).
LogTable stirling1_table(long nmax, double alpha);

/// S(m+1,k) = S(m,k-1) + (m + r - k alpha) S(m,k), S(0,0) = 1. r > 0.
LogTable noncentral_stirling1_table(long mmax, double alpha, double r);

/// Same numbers as noncentral_stirling1_table, built instead from the central
/// table by S_r(m,k) = sum_s C(m,s) (r)_{m-s} S(s,k).
LogTable noncentral_stirling1_by_convolution(long mmax, double alpha, double r);

/// S(n+1,k) = S(n,k-1) + (k + gamma) S(n,k), S(0,0) = 1. gamma > 0.
LogTable noncentral_stirling2_table(long rmax, double gamma);

/// Row n of the first-kind triangle, O(n) memory.
std::vector<LogValue> stirling1_row(long n, double alpha);

/// Row m of the non-central first-kind triangle, O(m) memory.
std::vector<LogValue> noncentral_stirling1_row(long m, double alpha, double r);

/// Signed non-central second-kind numbers in arbitrary arithmetic T; unlike
/// the log table this also admits gamma <= 0. out[n][k], 0 <= k <= n <= rmax.
template <class T>
std::vector<std::vector<T>> noncentral_stirling2_values(int rmax, const T& gamma) {
  std::vector<std::vector<T>> s(static_cast<std::size_t>(rmax) + 1);
  s[0].assign(1, T(1));
  for (int n = 0; n < rmax; ++n) {
    auto& next = s[n + 1];
    next.assign(static_cast<std::size_t>(n) + 2, T(0));
    for (int k = 0; k <= n + 1; ++k) {
      T v(0);
      if (k > 0) v += s[n][k - 1];
      if (k <= n) v += (T(k) + gamma) * s[n][k];
      next[k] = v;
    }
  }
  return s;
}

}  // namespace pdrich

#endif
