#include "pdrich/simulate.hpp"

#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "pdrich/errors.hpp"
#include "pdrich/stats.hpp"

namespace pdrich {

namespace {

// Runs body(i) for i in [0, runs), interleaved over threads. Each run owns its
// random stream, so the outcome does not depend on the thread count.
template <class Body>
void for_each_run(long runs, unsigned threads, Body&& body) {
  if (threads <= 1 || runs < 2) {
    for (long i = 0; i < runs; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (long i = t; i < runs; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void require_runs(long runs) {
  if (runs < 1) throw DomainError("run count must be >= 1");
}

}  // namespace

SeatState::SeatState(std::vector<long> block_sizes) : blocks_(std::move(block_sizes)) {
  for (long b : blocks_) {
    if (b < 1) throw DomainError("block sizes must be positive");
    n_ += b;
  }
}

void SeatState::seat(long block) {
  if (block == k())
    blocks_.push_back(1);
  else
    ++blocks_.at(static_cast<std::size_t>(block));
  ++n_;
}

std::vector<double> seating_probabilities(const SeatState& state, const PDParams& params) {
  const double a = params.alpha(), t = params.theta();
  const double den = t + static_cast<double>(state.n());
  std::vector<double> p;
  p.reserve(state.block_sizes().size() + 1);
  for (long b : state.block_sizes()) p.push_back((static_cast<double>(b) - a) / den);
  p.push_back((t + static_cast<double>(state.k()) * a) / den);
  return p;
}

long draw_seat(const SeatState& state, const PDParams& params, Rng& rng) {
  const double a = params.alpha(), t = params.theta();
  if (state.n() == 0) return 0;
  // u uniform on (0, theta + n); the new-block mass sits at the end
  double u = uniform_open(rng) * (t + static_cast<double>(state.n()));
  const auto& blocks = state.block_sizes();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    u -= static_cast<double>(blocks[j]) - a;
    if (u < 0.0) return static_cast<long>(j);
  }
  return state.k();
}

SeatState crp_sample(const PDParams& params, long n, Rng& rng) {
  if (n < 1) throw DomainError("crp_sample needs n >= 1");
  SeatState s;
  for (long i = 0; i < n; ++i) s.seat(draw_seat(s, params, rng));
  return s;
}

SeatState crp_sample(const PDParams& params, long n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return crp_sample(params, n, rng);
}

Continuation continue_sample(const SeatState& state, const PDParams& params, long m, Rng& rng) {
  if (m < 0) throw DomainError("continue_sample needs m >= 0");
  Continuation out{0, 0, state};
  const long k_old = state.k();
  for (long i = 0; i < m; ++i) out.state.seat(draw_seat(out.state, params, rng));
  out.k_new = out.state.k() - k_old;
  for (long j = k_old; j < out.state.k(); ++j) out.s_new += out.state.block_sizes()[j];
  return out;
}

Continuation continue_sample(const SeatState& state, const PDParams& params, long m,
                             std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return continue_sample(state, params, m, rng);
}

std::vector<long> kn_draws(const PDParams& params, long n, long runs, std::uint64_t seed,
                           unsigned threads) {
  require_runs(runs);
  std::vector<long> out(static_cast<std::size_t>(runs));
  for_each_run(runs, threads, [&](long i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    out[i] = crp_sample(params, n, rng).k();
  });
  return out;
}

ContinuationDraws continuation_draws(const SeatState& pilot, const PDParams& params, long m,
                                     long runs, std::uint64_t seed, unsigned threads) {
  require_runs(runs);
  ContinuationDraws out;
  out.k_new.resize(static_cast<std::size_t>(runs));
  out.s_new.resize(static_cast<std::size_t>(runs));
  for_each_run(runs, threads, [&](long i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    const auto c = continue_sample(pilot, params, m, rng);
    out.k_new[i] = c.k_new;
    out.s_new[i] = c.s_new;
  });
  out.attempts = runs;
  return out;
}

ContinuationDraws conditioned_draws(const PDParams& params, long n, long k, long m, long runs,
                                    std::uint64_t seed, long max_attempts, unsigned threads) {
  require_runs(runs);
  if (k < 1 || k > n) throw DomainError("conditioning needs 1 <= k <= n");
  ContinuationDraws out;
  out.k_new.resize(static_cast<std::size_t>(runs));
  out.s_new.resize(static_cast<std::size_t>(runs));
  std::vector<long> attempts(static_cast<std::size_t>(runs), 0);
  for_each_run(runs, threads, [&](long i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    SeatState pilot;
    long tries = 0;
    do {
      if (++tries > max_attempts)
        throw SamplingError("could not hit K_n = " + std::to_string(k) + " within " +
                            std::to_string(max_attempts) + " pilot simulations");
      pilot = crp_sample(params, n, rng);
    } while (pilot.k() != k);
    const auto c = continue_sample(pilot, params, m, rng);
    out.k_new[i] = c.k_new;
    out.s_new[i] = c.s_new;
    attempts[i] = tries;
  });
  for (long t : attempts) out.attempts += t;
  return out;
}

DeletionReport deletion_check(const PDParams& params, long n, long k, long m, long runs,
                              std::uint64_t seed, const DeletionOptions& opts) {
  if (m < 0) throw DomainError("m must be >= 0");
  if (runs < opts.min_stratum)
    throw SamplingError("insufficient conditioned sample size: " + std::to_string(runs) +
                        " runs below the per-stratum floor " + std::to_string(opts.min_stratum));
  const auto draws = conditioned_draws(params, n, k, m, runs, seed, opts.max_attempts, opts.threads);

  DeletionReport rep;
  rep.conditioned_runs = runs;
  rep.attempts = draws.attempts;
  rep.significance = opts.significance;
  rep.null_theta = opts.wrong_null ? params.theta()
                                   : params.theta() + static_cast<double>(k) * params.alpha();
  const PDParams null_params(params.alpha(), rep.null_theta);

  // counts[s][k*]
  std::vector<std::vector<long>> counts(static_cast<std::size_t>(m) + 1);
  for (long s = 0; s <= m; ++s) counts[s].assign(static_cast<std::size_t>(s) + 1, 0);
  for (long i = 0; i < runs; ++i) ++counts[draws.s_new[i]][draws.k_new[i]];

  bool any_testable = false;
  for (long s = 0; s <= m; ++s) {
    StratumResult st;
    st.s = s;
    for (long c : counts[s]) st.count += c;
    if (s <= 1) {
      // K_0 = 0 and K_1 = 1 surely; any mass elsewhere is a rejection
      const long off = st.count - counts[s][s];
      st.tested = st.count > 0;
      st.p_value = off == 0 ? 1.0 : 0.0;
      st.rejected = off != 0;
    } else if (st.count >= opts.min_stratum) {
      any_testable = true;
      const auto null_pmf = kn_pmf(null_params, s);
      std::vector<double> probs(static_cast<std::size_t>(s) + 1, 0.0);
      for (long j = 1; j <= s; ++j) probs[j] = null_pmf.prob(j);
      const auto chi = chi_square_gof(counts[s], probs);
      st.tested = true;
      st.statistic = chi.statistic;
      st.dof = chi.dof;
      st.p_value = chi.p_value;
      st.rejected = chi.p_value < opts.significance;
    }
    rep.any_rejected = rep.any_rejected || st.rejected;
    rep.strata.push_back(st);
  }
  if (m >= 2 && !any_testable)
    throw SamplingError("insufficient conditioned sample size: no stratum with s >= 2 reached " +
                        std::to_string(opts.min_stratum) + " runs");
  return rep;
}

}  // namespace pdrich
