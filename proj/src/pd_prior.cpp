#include "pdrich/pd_prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moments_detail.hpp"
#include "pdrich/errors.hpp"
#include "pdrich/stirling.hpp"

namespace pdrich {

PDParams::PDParams(double alpha, double theta) : alpha_(alpha), theta_(theta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
  if (!(theta + alpha > 0.0) || !std::isfinite(theta))
    throw DomainError("theta must exceed -alpha, got theta=" + std::to_string(theta));
}

PartitionData::PartitionData(std::vector<long> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw DomainError("partition data needs at least one block");
  for (long c : counts_) {
    if (c < 1) throw DomainError("block counts must be positive");
    n_ += c;
  }
}

double log_weight(const PDParams& params, long n, long k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("log_weight needs 1 <= k <= n");
  const double a = params.alpha(), t = params.theta();
  return log_gen_rising_factorial(t + a, k - 1, a) - log_rising_factorial(t + 1.0, n - 1);
}

double eppf_log(const PDParams& params, const PartitionData& data) {
  double acc = log_weight(params, data.n(), data.k());
  const double one_minus = 1.0 - params.alpha();
  for (long c : data.counts()) acc += log_rising_factorial(one_minus, c - 1);
  return acc;
}

Pmf kn_pmf(const PDParams& params, long n) {
  if (n < 1) throw DomainError("kn_pmf needs n >= 1");
  const double a = params.alpha(), t = params.theta();
  const auto row = stirling1_row(n, a);
  const auto num = log_gen_rising_prefix(t + a, n - 1, a);
  const double den = log_rising_factorial(t + 1.0, n - 1);
  std::vector<LogValue> lp(static_cast<std::size_t>(n));
  for (long k = 1; k <= n; ++k)
    lp[k - 1] = LogValue::from_log(num[k - 1] - den) * row[k];
  return Pmf(1, std::move(lp));
}

double kn_mean(const PDParams& params, long n) {
  if (n < 1) throw DomainError("kn_mean needs n >= 1");
  const double a = params.alpha(), t = params.theta();
  if (t > 0.0) {
    // (theta+alpha)_n / (alpha (theta+1)_{n-1}) - theta/alpha rewritten with
    // theta (theta+1)_{n-1} = (theta)_n to avoid the cancellation
    return (t / a) * std::expm1(log_rising_ratio(t + a, t, n));
  }
  return std::exp(log_rising_factorial(t + a, n) - std::log(a) -
                  log_rising_factorial(t + 1.0, n - 1)) -
         t / a;
}

double kn_moment(const PDParams& params, long n, int r) {
  if (n < 1) throw DomainError("kn_moment needs n >= 1");
  if (r < 1) throw DomainError("kn_moment needs r >= 1");
  const double a = params.alpha(), t = params.theta();
  const double gamma = t / a;
  return detail::alternating_moment(gamma + 1.0, gamma, t + 1.0, a, n - 1, r);
}

namespace {

struct FitSpace {
  const PartitionData& data;
  const FitBox& box;
  long evaluations = 0;

  double alpha_at(double u) const { return box.alpha_lo + u * (box.alpha_hi - box.alpha_lo); }
  double theta_at(double alpha, double v) const {
    const double lo = -alpha + box.theta_margin;
    // quadratic spacing puts more resolution near the lower edge
    return lo + v * v * (box.theta_hi - lo);
  }
  double value(double u, double v) {
    ++evaluations;
    const double alpha = alpha_at(u);
    return eppf_log(PDParams(alpha, theta_at(alpha, v)), data);
  }
};

}  // namespace

FitResult fit_params(const PartitionData& data, const FitBox& box, double tol) {
  if (data.k() < 2)
    throw Unidentifiable("fit needs at least two distinct species, got k=" +
                         std::to_string(data.k()));
  if (!(box.alpha_lo > 0.0 && box.alpha_lo < box.alpha_hi && box.alpha_hi < 1.0))
    throw DomainError("alpha box must lie strictly inside (0,1)");
  if (!(box.theta_margin > 0.0 && box.theta_hi > -box.alpha_lo + box.theta_margin))
    throw DomainError("theta box must lie strictly inside theta > -alpha");
  if (!(tol > 0.0)) throw DomainError("fit tolerance must be positive");

  FitSpace space{data, box};
  constexpr int kGrid = 41;
  double best_u = 0.0, best_v = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double u = static_cast<double>(i) / (kGrid - 1);
      const double v = static_cast<double>(j) / (kGrid - 1);
      const double f = space.value(u, v);
      if (f > best) {
        best = f;
        best_u = u;
        best_v = v;
      }
    }
  }

  FitResult res;
  res.best_grid_log_likelihood = best;
  res.path.push_back(best);

  // compass search in the unit square
  double step = 1.0 / (kGrid - 1);
  while (step > tol) {
    bool moved = false;
    const double du[4] = {step, -step, 0.0, 0.0};
    const double dv[4] = {0.0, 0.0, step, -step};
    for (int d = 0; d < 4; ++d) {
      const double u = std::clamp(best_u + du[d], 0.0, 1.0);
      const double v = std::clamp(best_v + dv[d], 0.0, 1.0);
      if (u == best_u && v == best_v) continue;
      const double f = space.value(u, v);
      if (f > best) {
        best = f;
        best_u = u;
        best_v = v;
        moved = true;
        res.path.push_back(best);
      }
    }
    if (!moved) step *= 0.5;
  }

  const double alpha = space.alpha_at(best_u);
  res.params = PDParams(alpha, space.theta_at(alpha, best_v));
  res.log_likelihood = best;
  res.evaluations = space.evaluations;
  const double edge = 10.0 * tol;
  if (best_u <= edge) res.boundary_edges.emplace_back("alpha_lo");
  if (best_u >= 1.0 - edge) res.boundary_edges.emplace_back("alpha_hi");
  if (best_v <= edge) res.boundary_edges.emplace_back("theta_lo");
  if (best_v >= 1.0 - edge) res.boundary_edges.emplace_back("theta_hi");
  res.on_boundary = !res.boundary_edges.empty();
  return res;
}

}  // namespace pdrich
