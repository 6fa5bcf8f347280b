#ifndef PDRICH_CONDITIONAL_HPP
#define PDRICH_CONDITIONAL_HPP

// Prediction given a pilot sample of size n with k species: the Beta-Binomial
// law of S_m (observations falling in new species), the deletion-of-classes
// law of K_m given S_m, and the exact law, mean and moments of K_m.

#include <cstdint>

#include "pdrich/pd_prior.hpp"
#include "pdrich/pmf.hpp"

namespace pdrich {

struct PredictionQuery {
  PredictionQuery(const PDParams& params, long n, long k, long m);

  PDParams params;
  long n;
  long k;
  long m;

  double new_mass() const { return params.theta() + static_cast<double>(k) * params.alpha(); }
  double old_mass() const { return static_cast<double>(n) - static_cast<double>(k) * params.alpha(); }
};

/// Beta-Binomial(m, theta + k alpha, n - k alpha) law of S_m, support {0..m}.
Pmf sm_pmf(const PredictionQuery& q);

/// (theta + k alpha)/(theta + n): probability that the next draw is a new species.
double new_species_prob(const PredictionQuery& q);

/// Law of K_m given K_n = k and S_m = s: K_s under PD(alpha, theta + k alpha).
/// Point mass at 0 when s = 0; otherwise exactly kn_pmf's result (support {1..s}).
Pmf km_given_sm_pmf(const PDParams& params, long k, long s);

/// Law of K_m given K_n = k, support {0..m}, from the non-central
/// first-kind row with shift n - k alpha.
Pmf km_pmf(const PredictionQuery& q);

/// E[K_m | K_n = k] in closed form.
double km_mean(const PredictionQuery& q);

/// E[K_m^r | K_n = k] through the second-kind expansion.
double km_moment(const PredictionQuery& q, int r);

enum class IntervalMethod { Exact, Asymptotic };

struct IntervalOptions {
  long exact_cap = 10000;
  long samples = 200000;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
};

struct CredibleInterval {
  long lo = 0;
  long hi = 0;
  double coverage = 1.0;
  IntervalMethod method = IntervalMethod::Exact;
  // exact method only: whether the pmf was found unimodal (if not, the
  // interval is the hull of the highest-mass set)
  bool unimodal = true;
};

/// Credible interval for K_m given K_n = k at the given level in (0,1).
///
/// Exact: the shortest run of consecutive k* values whose km_pmf mass reaches
/// the level (ties broken by larger mass). Asymptotic: empirical quantiles of
/// m^alpha Z from sample_limit, rounded outward and clipped to [0, m].
/// Throws CapExceeded for exact with m above the cap and SamplingError when
/// too few draws fall in each tail.
CredibleInterval credible_interval(const PredictionQuery& q, double level, IntervalMethod method,
                                   const IntervalOptions& opts = {});

/// Drop cached non-central rows.
void clear_row_cache();

}  // namespace pdrich

#endif
