#ifndef PDRICH_ORACLE_HPP
#define PDRICH_ORACLE_HPP

// Brute-force ground truth in exact rational arithmetic: set partitions by
// restricted-growth strings and exact continuation laws by seating new
// customers one at a time. No floating point inside.

#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace pdrich::oracle {

using Rational = mpq_class;

constexpr int kMaxSize = 12;

/// Exact (alpha, theta) with 0 < alpha < 1, theta > -alpha and bounded denominators.
class RationalParams {
 public:
  RationalParams(const Rational& alpha, const Rational& theta, long max_denominator = 1000000);

  const Rational& alpha() const { return alpha_; }
  const Rational& theta() const { return theta_; }
  double alpha_value() const { return alpha_.get_d(); }
  double theta_value() const { return theta_.get_d(); }

 private:
  Rational alpha_;
  Rational theta_;
};

/// Calls visit once per set partition of {1..n}, given as a restricted-growth
/// string (rgs[i] is the block of element i, blocks numbered by first
/// appearance). Returns the number of partitions. n in [1, kMaxSize].
long enumerate_partitions(int n, const std::function<void(std::span<const int>)>& visit);

/// (x)_b for rational x.
Rational rising(const Rational& x, long b);

/// V(n,k) prod_j (1 - alpha)_{n_j - 1}.
Rational exact_eppf(const RationalParams& params, std::span<const long> counts);

/// Product of one-step seating probabilities along a seating sequence
/// (restricted-growth string).
Rational exact_path_probability(const RationalParams& params, std::span<const int> rgs);

/// P(K_n = k), index k = 0..n (entry 0 is zero), by summing the EPPF over all
/// set partitions of {1..n}.
std::vector<Rational> exact_kn_pmf(const RationalParams& params, int n);

struct ExactContinuation {
  std::vector<Rational> km;                 // P(K_m = k*), k* = 0..m
  std::vector<Rational> sm;                 // P(S_m = s), s = 0..m
  std::vector<std::vector<Rational>> joint;  // joint[s][k*], k* = 0..s
};

/// Exact law of the continuation of a pilot with multiplicities counts by m
/// further customers. n + m <= kMaxSize.
ExactContinuation exact_km_pmf(const RationalParams& params, std::span<const long> counts, int m);

}  // namespace pdrich::oracle

#endif
