#include "pdrich/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "moments_detail.hpp"
#include "pdrich/asymptotics.hpp"
#include "pdrich/errors.hpp"
#include "pdrich/stirling.hpp"

namespace pdrich {

namespace {

using Row = std::vector<LogValue>;

// Rows of the non-central triangle keyed by (alpha, r, m). Readers share the
// lock; a miss computes outside the lock and inserts under the unique lock.
class RowCache {
 public:
  std::shared_ptr<const Row> get(double alpha, double r, long m) {
    const Key key{alpha, r, m};
    {
      std::shared_lock lock(mutex_);
      auto it = rows_.find(key);
      if (it != rows_.end()) return it->second;
    }
    auto row = std::make_shared<const Row>(noncentral_stirling1_row(m, alpha, r));
    std::unique_lock lock(mutex_);
    if (rows_.size() >= kMaxEntries) rows_.clear();
    rows_.emplace(key, row);
    return row;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    rows_.clear();
  }

 private:
  using Key = std::tuple<double, double, long>;
  static constexpr std::size_t kMaxEntries = 64;
  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Row>> rows_;
};

RowCache& row_cache() {
  static RowCache cache;
  return cache;
}

std::vector<double> log_factorials(long m) {
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  for (long i = 1; i <= m; ++i) out[i] = out[i - 1] + std::log(static_cast<double>(i));
  return out;
}

bool is_unimodal(const std::vector<double>& p) {
  std::size_t i = 1;
  while (i < p.size() && p[i] >= p[i - 1] * (1.0 - 1e-12)) ++i;
  while (i < p.size() && p[i] <= p[i - 1] * (1.0 + 1e-12)) ++i;
  return i == p.size();
}

CredibleInterval exact_interval(const Pmf& pmf, double level) {
  const auto p = pmf.probs();
  const long size = static_cast<long>(p.size());
  std::vector<long double> prefix(p.size() + 1, 0.0L);
  for (long i = 0; i < size; ++i) prefix[i + 1] = prefix[i] + p[i];
  auto mass = [&](long lo, long hi) { return static_cast<double>(prefix[hi + 1] - prefix[lo]); };

  CredibleInterval out;
  out.method = IntervalMethod::Exact;
  out.unimodal = is_unimodal(p);
  if (mass(0, size - 1) < level) {
    // only rounding can get here; the whole support is the answer
    out.lo = pmf.support_min();
    out.hi = pmf.support_max();
    out.coverage = mass(0, size - 1);
    return out;
  }

  if (out.unimodal) {
    long best_lo = 0, best_hi = size - 1;
    double best_mass = mass(0, size - 1);
    long hi = 0;
    for (long lo = 0; lo < size; ++lo) {
      hi = std::max(hi, lo);
      while (hi < size && mass(lo, hi) < level) ++hi;
      if (hi == size) break;
      const double mm = mass(lo, hi);
      if (hi - lo < best_hi - best_lo || (hi - lo == best_hi - best_lo && mm > best_mass)) {
        best_lo = lo;
        best_hi = hi;
        best_mass = mm;
      }
    }
    out.lo = pmf.support_min() + best_lo;
    out.hi = pmf.support_min() + best_hi;
    out.coverage = best_mass;
    return out;
  }

  // highest-mass set, reported through its hull
  std::vector<long> order(p.size());
  std::iota(order.begin(), order.end(), 0L);
  std::stable_sort(order.begin(), order.end(), [&](long a, long b) { return p[a] > p[b]; });
  long double acc = 0.0L;
  long lo = size, hi = -1;
  for (long idx : order) {
    acc += p[idx];
    lo = std::min(lo, idx);
    hi = std::max(hi, idx);
    if (acc >= level) break;
  }
  out.lo = pmf.support_min() + lo;
  out.hi = pmf.support_min() + hi;
  out.coverage = mass(lo, hi);
  return out;
}

CredibleInterval asymptotic_interval(const PredictionQuery& q, double level,
                                     const IntervalOptions& opts) {
  const double tail = 0.5 * (1.0 - level);
  if (static_cast<double>(opts.samples) * tail < 10.0)
    throw SamplingError("insufficient sampler size: " + std::to_string(opts.samples) +
                        " draws leave fewer than 10 per tail at level " + std::to_string(level));
  const LimitLaw law(q.params, q.n, q.k);
  SamplerOptions so;
  so.threads = opts.threads;
  auto z = sample_limit(law, opts.samples, opts.seed, so);
  const double scale = std::pow(static_cast<double>(q.m), q.params.alpha());
  for (auto& v : z) v *= scale;
  std::sort(z.begin(), z.end());
  const long count = static_cast<long>(z.size());
  const long ilo = std::clamp(static_cast<long>(std::floor(tail * count)), 0L, count - 1);
  const long ihi = std::clamp(static_cast<long>(std::ceil((1.0 - tail) * count)) - 1, 0L, count - 1);

  CredibleInterval out;
  out.method = IntervalMethod::Asymptotic;
  out.lo = std::clamp(static_cast<long>(std::floor(z[ilo])), 0L, q.m);
  out.hi = std::clamp(static_cast<long>(std::ceil(z[ihi])), out.lo, q.m);
  const auto first = std::lower_bound(z.begin(), z.end(), static_cast<double>(out.lo));
  const auto last = std::upper_bound(z.begin(), z.end(), static_cast<double>(out.hi));
  out.coverage = static_cast<double>(last - first) / static_cast<double>(count);
  return out;
}

}  // namespace

PredictionQuery::PredictionQuery(const PDParams& params_, long n_, long k_, long m_)
    : params(params_), n(n_), k(k_), m(m_) {
  if (n < 1) throw DomainError("pilot size n must be >= 1");
  if (k < 1 || k > n) throw DomainError("pilot species count k must lie in [1, n]");
  if (m < 0) throw DomainError("additional sample size m must be >= 0");
}

Pmf sm_pmf(const PredictionQuery& q) {
  if (q.m == 0) return Pmf::point_mass(0);
  const auto lf = log_factorials(q.m);
  const auto old_part = log_rising_prefix(q.old_mass(), q.m);
  const auto new_part = log_rising_prefix(q.new_mass(), q.m);
  const double den = log_rising_factorial(q.params.theta() + static_cast<double>(q.n), q.m);
  std::vector<LogValue> lp(static_cast<std::size_t>(q.m) + 1);
  for (long s = 0; s <= q.m; ++s) {
    const double binom = lf[q.m] - lf[s] - lf[q.m - s];
    lp[s] = LogValue::from_log(binom + old_part[q.m - s] + new_part[s] - den);
  }
  return Pmf(0, std::move(lp));
}

double new_species_prob(const PredictionQuery& q) {
  if (q.m != 1) throw DomainError("new_species_prob is the one-step (m = 1) probability");
  return q.new_mass() / (q.params.theta() + static_cast<double>(q.n));
}

Pmf km_given_sm_pmf(const PDParams& params, long k, long s) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (s < 0) throw DomainError("s must be >= 0");
  if (s == 0) return Pmf::point_mass(0);
  const PDParams shifted(params.alpha(), params.theta() + static_cast<double>(k) * params.alpha());
  return kn_pmf(shifted, s);
}

Pmf km_pmf(const PredictionQuery& q) {
  if (q.m == 0) return Pmf::point_mass(0);
  const double a = q.params.alpha();
  const auto row = row_cache().get(a, q.old_mass(), q.m);
  const auto num = log_gen_rising_prefix(q.new_mass(), q.m, a);
  const double den = log_rising_factorial(q.params.theta() + static_cast<double>(q.n), q.m);
  std::vector<LogValue> lp(static_cast<std::size_t>(q.m) + 1);
  for (long j = 0; j <= q.m; ++j) lp[j] = LogValue::from_log(num[j] - den) * (*row)[j];
  return Pmf(0, std::move(lp));
}

double km_mean(const PredictionQuery& q) {
  const double a = q.params.alpha();
  const double base = q.params.theta() + static_cast<double>(q.n);
  return q.new_mass() / a * std::expm1(log_rising_ratio(base + a, base, q.m));
}

double km_moment(const PredictionQuery& q, int r) {
  if (r < 1) throw DomainError("moment order must be >= 1");
  if (q.m == 0) return 0.0;
  const double a = q.params.alpha();
  const double gamma = q.new_mass() / a;
  return detail::alternating_moment(gamma, gamma, q.params.theta() + static_cast<double>(q.n), a,
                                    q.m, r);
}

CredibleInterval credible_interval(const PredictionQuery& q, double level, IntervalMethod method,
                                   const IntervalOptions& opts) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0,1)");
  if (q.m == 0) {
    CredibleInterval out;
    out.method = method;
    return out;
  }
  if (method == IntervalMethod::Exact) {
    if (q.m > opts.exact_cap)
      throw CapExceeded("exact interval needs m <= exact cap " + std::to_string(opts.exact_cap) +
                        ", got m=" + std::to_string(q.m));
    return exact_interval(km_pmf(q), level);
  }
  return asymptotic_interval(q, level, opts);
}

void clear_row_cache() { row_cache().clear(); }

}  // namespace pdrich
