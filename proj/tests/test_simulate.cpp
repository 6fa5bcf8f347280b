#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pdrich/conditional.hpp"
#include "pdrich/errors.hpp"
#include "pdrich/oracle.hpp"
#include "pdrich/simulate.hpp"
#include "pdrich/stats.hpp"

using namespace pdrich;

namespace {

double mean_of(const std::vector<long>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("seating rule") {
  const PDParams p(0.5, 0.5);
  const SeatState one = crp_sample(p, 1, 1);
  CHECK(one.k() == 1);
  CHECK(one.block_sizes() == std::vector<long>{1});
  const auto probs = seating_probabilities(SeatState({3, 1}), p);
  CHECK(probs[0] == doctest::Approx(2.5 / 4.5));
  CHECK(probs[1] == doctest::Approx(0.5 / 4.5));
  CHECK(probs[2] == doctest::Approx(1.5 / 4.5));
  const Continuation none = continue_sample(SeatState({2, 1}), p, 0, 3);
  CHECK(none.k_new == 0);
  CHECK(none.s_new == 0);
  CHECK(none.state.block_sizes() == std::vector<long>{2, 1});
}

TEST_CASE("trajectory probabilities reproduce the eppf") {
  const PDParams p(0.3, 0.8);
  for (int n = 1; n <= 6; ++n)
    oracle::enumerate_partitions(n, [&](std::span<const int> rgs) {
      SeatState s;
      double logp = 0.0;
      for (int b : rgs) {
        logp += std::log(seating_probabilities(s, p)[b]);
        s.seat(b);
      }
      CHECK(logp == doctest::Approx(eppf_log(p, PartitionData(s.block_sizes()))).epsilon(1e-12));
    });
}

TEST_CASE("prior simulations match the exact law") {
  const PDParams p(0.5, 0.5);
  const auto k2 = kn_draws(p, 2, 100000, 17, 4);
  const double frac = std::count(k2.begin(), k2.end(), 2L) / 100000.0;
  CHECK(std::fabs(frac - 2.0 / 3.0) <= 3 * std::sqrt(2.0 / 9.0 / 100000.0));
  const auto k50 = kn_draws(p, 50, 100000, 18, 4);
  CHECK(std::fabs(mean_of(k50) - kn_mean(p, 50)) <= 3 * standard_error(k50));
  CHECK(total_variation(empirical_pmf(k50, 1, 50), kn_pmf(p, 50).probs()) <= 0.01);
}

TEST_CASE("continuations match the exact laws") {
  const PDParams p(0.5, 0.5);
  const auto d = continuation_draws(SeatState({2}), p, 5, 100000, 19, 4);
  const PredictionQuery q(p, 2, 1, 5);
  CHECK(total_variation(empirical_pmf(d.s_new, 0, 6), sm_pmf(q).probs()) <= 0.01);
  CHECK(total_variation(empirical_pmf(d.k_new, 0, 6), km_pmf(q).probs()) <= 0.01);
  CHECK(std::fabs(mean_of(d.k_new) - km_mean(q)) <= 3 * standard_error(d.k_new));
}

TEST_CASE("continuing a sample equals sampling the total") {
  const PDParams p(0.4, 1.0);
  const long runs = 100000;
  std::vector<long> two_step(runs);
  for (long i = 0; i < runs; ++i) {
    Rng rng = make_stream(23, static_cast<std::uint64_t>(i));
    const SeatState first = crp_sample(p, 6, rng);
    two_step[i] = continue_sample(first, p, 9, rng).state.k();
  }
  const auto direct = kn_draws(p, 15, runs, 24, 4);
  CHECK(total_variation(empirical_pmf(two_step, 1, 15), empirical_pmf(direct, 1, 15)) <= 0.01);
}

TEST_CASE("continuation depends on the pilot only through n and k") {
  const PDParams p(0.5, 0.5);
  const auto a = continuation_draws(SeatState({4, 1, 1}), p, 8, 100000, 31, 4);
  const auto b = continuation_draws(SeatState({2, 2, 2}), p, 8, 100000, 32, 4);
  CHECK(total_variation(empirical_pmf(a.k_new, 0, 9), empirical_pmf(b.k_new, 0, 9)) <= 0.01);
}

TEST_CASE("determinism across thread counts") {
  const PDParams p(0.5, 0.5);
  CHECK(kn_draws(p, 30, 5000, 7, 1) == kn_draws(p, 30, 5000, 7, 5));
  const auto a = conditioned_draws(p, 4, 2, 5, 2000, 8, 100000, 1);
  const auto b = conditioned_draws(p, 4, 2, 5, 2000, 8, 100000, 3);
  CHECK(a.k_new == b.k_new);
  CHECK(a.attempts == b.attempts);
}

TEST_CASE("deletion check") {
  const PDParams p(0.5, 0.5);
  DeletionOptions opts;
  opts.threads = 4;
  const DeletionReport ok = deletion_check(p, 2, 1, 6, 100000, 41, opts);
  CHECK_FALSE(ok.any_rejected);
  CHECK(ok.strata.size() == 7);
  CHECK(ok.strata[1].p_value == 1.0);
  CHECK_FALSE(ok.strata[1].rejected);
  int tested = 0;
  for (const auto& s : ok.strata) tested += s.tested;
  CHECK(tested >= 4);

  opts.wrong_null = true;
  const DeletionReport wrong = deletion_check(p, 2, 1, 6, 100000, 41, opts);
  CHECK(wrong.any_rejected);
  CHECK(wrong.null_theta == 0.5);

  CHECK_THROWS_AS(deletion_check(p, 2, 1, 6, 50, 41), SamplingError);
}

TEST_CASE("statistics helpers") {
  const std::vector<long> obs{10, 20, 30, 40};
  const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
  const auto chi = chi_square_gof(obs, probs);
  CHECK(chi.statistic == doctest::Approx(0.0));
  CHECK(chi.p_value == doctest::Approx(1.0));
  CHECK(kolmogorov_pvalue(0.0, 100) == doctest::Approx(1.0));
  CHECK(kolmogorov_pvalue(0.5, 1000) < 1e-10);
  // reference value of the asymptotic Kolmogorov tail at lambda = 1.36
  CHECK(kolmogorov_pvalue(1.36 / std::sqrt(1e8), 1e8) == doctest::Approx(0.049485876755377876).epsilon(1e-3));
}
