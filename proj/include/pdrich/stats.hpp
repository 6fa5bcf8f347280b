#ifndef PDRICH_STATS_HPP
#define PDRICH_STATS_HPP

// Goodness-of-fit helpers for the Monte Carlo checks.

#include <span>
#include <vector>

namespace pdrich {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Pearson goodness of fit of category counts against probabilities.
/// Adjacent categories are merged left to right until every bin expects at
/// least min_expected observations; a short final bin joins its neighbour.
ChiSquareResult chi_square_gof(std::span<const long> observed, std::span<const double> probs,
                               double min_expected = 5.0);

/// Asymptotic Kolmogorov tail probability P(D > d) for effective size n_eff.
double kolmogorov_pvalue(double d, double n_eff);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample test given the sorted sample and the model CDF at each point.
KsResult ks_one_sample_sorted(std::span<const double> sorted, std::span<const double> cdf_values);

/// 0.5 sum |p_i - q_i|, shorter vector padded with zeros.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Relative frequencies of integer values on {lo, ..., lo + size - 1}.
std::vector<double> empirical_pmf(std::span<const long> values, long lo, long size);

/// Standard error of the mean.
double standard_error(std::span<const long> values);

}  // namespace pdrich

#endif
