#ifndef PDRICH_MOMENTS_DETAIL_HPP
#define PDRICH_MOMENTS_DETAIL_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pdrich/stirling.hpp"

namespace pdrich::detail {

// sum_{j=0}^{r} (-1)^{r-j} (first)_j S2(r,j; gamma) prod_{i<len} (base + j*alpha + i)/(base + i)
//
// The signs alternate and the terms can exceed the result by many orders of
// magnitude, so the sum, the second-kind numbers and the product ratios are
// carried in 50-digit arithmetic whenever len is moderate.
inline double alternating_moment(double first, double gamma, double base, double alpha, long len,
                                 int r) {
  using boost::multiprecision::cpp_bin_float_50;
  using HP = cpp_bin_float_50;
  constexpr long kHighPrecisionLimit = 200000;

  if (len <= kHighPrecisionLimit) {
    const HP g(gamma);
    const auto s2 = noncentral_stirling2_values<HP>(r, g);
    HP total(0), rising(1);
    for (int j = 0; j <= r; ++j) {
      if (j > 0) rising *= HP(first) + HP(j - 1);
      HP ratio(1);
      const HP shift = HP(j) * HP(alpha);
      for (long i = 0; i < len; ++i) ratio *= HP(1) + shift / (HP(base) + HP(i));
      HP term = rising * s2[r][j] * ratio;
      total += ((r - j) % 2 == 0) ? term : HP(-term);
    }
    return static_cast<double>(total);
  }

  const auto s2 = noncentral_stirling2_values<long double>(r, gamma);
  long double total = 0.0L, rising = 1.0L;
  for (int j = 0; j <= r; ++j) {
    if (j > 0) rising *= static_cast<long double>(first) + (j - 1);
    long double ratio = std::exp(static_cast<long double>(log_rising_ratio(base + j * alpha, base, len)));
    long double term = rising * s2[r][j] * ratio;
    total += ((r - j) % 2 == 0) ? term : -term;
  }
  return static_cast<double>(total);
}

}  // namespace pdrich::detail

#endif
