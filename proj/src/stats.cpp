#include "pdrich/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "pdrich/errors.hpp"

namespace pdrich {

ChiSquareResult chi_square_gof(std::span<const long> observed, std::span<const double> probs,
                               double min_expected) {
  if (observed.size() != probs.size()) throw DomainError("observed and probs differ in length");
  long total = 0;
  for (long o : observed) total += o;
  ChiSquareResult res;
  if (total == 0) return res;

  std::vector<double> obs_bins, exp_bins;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += probs[i] * static_cast<double>(total);
    if (e_acc >= min_expected) {
      obs_bins.push_back(o_acc);
      exp_bins.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (o_acc > 0.0 || e_acc > 0.0) {
    if (exp_bins.empty()) {
      obs_bins.push_back(o_acc);
      exp_bins.push_back(e_acc);
    } else {
      obs_bins.back() += o_acc;
      exp_bins.back() += e_acc;
    }
  }
  res.bins = static_cast<int>(obs_bins.size());
  if (res.bins < 2) return res;
  for (std::size_t i = 0; i < obs_bins.size(); ++i) {
    const double d = obs_bins[i] - exp_bins[i];
    res.statistic += d * d / exp_bins[i];
  }
  res.dof = res.bins - 1;
  boost::math::chi_squared dist(res.dof);
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

double kolmogorov_pvalue(double d, double n_eff) {
  const double sn = std::sqrt(n_eff);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::fabs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_pvalue(d, na * nb / (na + nb))};
}

KsResult ks_one_sample_sorted(std::span<const double> sorted, std::span<const double> cdf_values) {
  if (sorted.empty() || sorted.size() != cdf_values.size())
    throw DomainError("KS test needs matching non-empty inputs");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf_values[i];
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_pvalue(d, n)};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t size = std::max(p.size(), q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    acc += std::fabs(a - b);
  }
  return 0.5 * acc;
}

std::vector<double> empirical_pmf(std::span<const long> values, long lo, long size) {
  std::vector<double> out(static_cast<std::size_t>(size), 0.0);
  if (values.empty()) return out;
  for (long v : values)
    if (v >= lo && v < lo + size) out[v - lo] += 1.0;
  for (auto& x : out) x /= static_cast<double>(values.size());
  return out;
}

double standard_error(std::span<const long> values) {
  const double n = static_cast<double>(values.size());
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (long v : values) mean += static_cast<double>(v);
  mean /= n;
  double ss = 0.0;
  for (long v : values) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace pdrich
