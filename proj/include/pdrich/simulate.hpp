#ifndef PDRICH_SIMULATE_HPP
#define PDRICH_SIMULATE_HPP

// Two-parameter Chinese restaurant process: forward simulation, conditional
// continuation of a pilot sample, and the deletion-of-classes check.

#include <cstdint>
#include <vector>

#include "pdrich/pd_prior.hpp"
#include "pdrich/random.hpp"

namespace pdrich {

/// Block sizes of a partially seated restaurant, in order of first arrival.
class SeatState {
 public:
  SeatState() = default;
  explicit SeatState(std::vector<long> block_sizes);

  const std::vector<long>& block_sizes() const { return blocks_; }
  long n() const { return n_; }
  long k() const { return static_cast<long>(blocks_.size()); }

  // block == k() opens a new block
  void seat(long block);

 private:
  std::vector<long> blocks_;
  long n_ = 0;
};

/// One-step probabilities: entry j < k is (n_j - alpha)/(theta + n),
/// entry k is (theta + k alpha)/(theta + n).
std::vector<double> seating_probabilities(const SeatState& state, const PDParams& params);

long draw_seat(const SeatState& state, const PDParams& params, Rng& rng);

SeatState crp_sample(const PDParams& params, long n, Rng& rng);
SeatState crp_sample(const PDParams& params, long n, std::uint64_t seed);

struct Continuation {
  long k_new = 0;  // K_m: blocks opened by the additional customers
  long s_new = 0;  // S_m: additional customers seated in those blocks
  SeatState state;
};

Continuation continue_sample(const SeatState& state, const PDParams& params, long m, Rng& rng);
Continuation continue_sample(const SeatState& state, const PDParams& params, long m,
                             std::uint64_t seed);

/// K_n over independent runs; run i uses stream (seed, i).
std::vector<long> kn_draws(const PDParams& params, long n, long runs, std::uint64_t seed,
                           unsigned threads = 1);

struct ContinuationDraws {
  std::vector<long> k_new;
  std::vector<long> s_new;
  long attempts = 0;  // pilot simulations, including rejected ones
};

/// Continuations of a fixed pilot state.
ContinuationDraws continuation_draws(const SeatState& pilot, const PDParams& params, long m,
                                     long runs, std::uint64_t seed, unsigned threads = 1);

/// Continuations of pilots drawn from the CRP and conditioned on K_n = k by
/// rejection. Throws SamplingError if a run needs more than max_attempts pilots.
ContinuationDraws conditioned_draws(const PDParams& params, long n, long k, long m, long runs,
                                    std::uint64_t seed, long max_attempts = 100000,
                                    unsigned threads = 1);

struct DeletionOptions {
  double significance = 0.001;
  long min_stratum = 100;  // strata with fewer conditioned runs are not tested
  long max_attempts = 100000;
  bool wrong_null = false;  // test against PD(alpha, theta) instead of PD(alpha, theta + k alpha)
  unsigned threads = 1;
};

struct StratumResult {
  long s = 0;
  long count = 0;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool tested = false;
  bool rejected = false;
};

struct DeletionReport {
  std::vector<StratumResult> strata;  // s = 0..m
  long conditioned_runs = 0;
  long attempts = 0;
  double significance = 0.0;
  double null_theta = 0.0;
  bool any_rejected = false;
};

/// Stratify conditioned runs by S_m = s and chi-square-test K_m within each
/// stratum against kn_pmf(PD(alpha, theta + k alpha), s).
DeletionReport deletion_check(const PDParams& params, long n, long k, long m, long runs,
                              std::uint64_t seed, const DeletionOptions& opts = {});

}  // namespace pdrich

#endif
