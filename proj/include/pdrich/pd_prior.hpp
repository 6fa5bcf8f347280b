#ifndef PDRICH_PD_PRIOR_HPP
#define PDRICH_PD_PRIOR_HPP

#include <string>
#include <vector>

#include "pdrich/pmf.hpp"

namespace pdrich {

/// Two-parameter Poisson-Dirichlet prior: 0 < alpha < 1, theta > -alpha.
class PDParams {
 public:
  PDParams(double alpha, double theta);

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }

 private:
  double alpha_;
  double theta_;
};

/// Observed species multiplicities (n_1, ..., n_k), each >= 1.
class PartitionData {
 public:
  explicit PartitionData(std::vector<long> counts);

  const std::vector<long>& counts() const { return counts_; }
  long n() const { return n_; }
  long k() const { return static_cast<long>(counts_.size()); }

 private:
  std::vector<long> counts_;
  long n_ = 0;
};

/// log V(n,k) = log [(theta+alpha)_{k-1 step alpha} / (theta+1)_{n-1}].
double log_weight(const PDParams& params, long n, long k);

/// Log probability of one particular set partition with the given block sizes.
double eppf_log(const PDParams& params, const PartitionData& data);

/// Law of the number of blocks K_n, support {1..n}.
Pmf kn_pmf(const PDParams& params, long n);

/// E[K_n] in closed form.
double kn_mean(const PDParams& params, long n);

/// E[K_n^r] through the non-central second-kind expansion.
double kn_moment(const PDParams& params, long n, int r);

/// Search box for fit_params. theta ranges over [-alpha + theta_margin, theta_hi].
struct FitBox {
  double alpha_lo = 0.01;
  double alpha_hi = 0.99;
  double theta_margin = 0.01;
  double theta_hi = 50.0;
};

struct FitResult {
  PDParams params{0.5, 0.5};
  double log_likelihood = 0.0;
  double best_grid_log_likelihood = 0.0;
  bool on_boundary = false;
  // subset of {"alpha_lo", "alpha_hi", "theta_lo", "theta_hi"}
  std::vector<std::string> boundary_edges;
  // best value after the grid and after every accepted polish move
  std::vector<double> path;
  long evaluations = 0;
};

/// Empirical-Bayes point estimate: maximize eppf_log over the box by a grid
/// scan followed by a compass-search polish. Throws Unidentifiable for k < 2.
FitResult fit_params(const PartitionData& data, const FitBox& box = {}, double tol = 1e-8);

}  // namespace pdrich

#endif
