#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "pdrich/conditional.hpp"
#include "pdrich/errors.hpp"
#include "pdrich/oracle.hpp"
#include "test_util.hpp"

using namespace pdrich;
using testutil::rel_err;

namespace {

oracle::Rational binomial(long m, long s) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(s));
  return oracle::Rational(c);
}

}  // namespace

TEST_CASE("query validation") {
  const PDParams p(0.5, 0.5);
  CHECK_THROWS_AS(PredictionQuery(p, 2, 3, 1), DomainError);
  CHECK_THROWS_AS(PredictionQuery(p, 2, 0, 1), DomainError);
  CHECK_THROWS_AS(PredictionQuery(p, 2, 1, -1), DomainError);
}

TEST_CASE("Beta-Binomial law of draws landing in new species") {
  const PDParams p(0.5, 0.5);
  const Pmf zero = sm_pmf(PredictionQuery(p, 2, 1, 0));
  CHECK(zero.size() == 1);
  CHECK(zero.prob(0) == 1.0);
  const Pmf one = sm_pmf(PredictionQuery(p, 2, 1, 1));
  CHECK(one.prob(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(one.prob(1) == doctest::Approx(0.4).epsilon(1e-14));

  // m=10, n=5, k=3, alpha=1/2, theta=1 against exact rationals
  const oracle::Rational a(1, 2), t(1), n(5), k(3);
  const Pmf got = sm_pmf(PredictionQuery(PDParams(0.5, 1.0), 5, 3, 10));
  oracle::Rational total = 0;
  for (long s = 0; s <= 10; ++s) {
    const oracle::Rational want = binomial(10, s) * oracle::rising(n - k * a, 10 - s) *
                                  oracle::rising(t + k * a, s) / oracle::rising(t + n, 10);
    total += want;
    CHECK(std::fabs(got.prob(s) - want.get_d()) <= 1e-12);
  }
  CHECK(total == 1);
}

TEST_CASE("sm mean and normalization") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0, 10.0})
      for (long n : {1L, 4L, 20L})
        for (long k : {1L, n / 2 + 1, n})
          for (long m : {1L, 7L, 60L}) {
            const PredictionQuery q(PDParams(alpha, theta), n, k, m);
            const Pmf s = sm_pmf(q);
            CHECK(std::fabs(s.total() - 1.0) <= 1e-10);
            CHECK(rel_err(s.mean(), m * q.new_mass() / (theta + n)) <= 1e-12);
            CHECK(std::fabs(km_pmf(q).total() - 1.0) <= 1e-10);
          }
}

TEST_CASE("one-step discovery probability") {
  const PDParams p(0.5, 0.5);
  CHECK(new_species_prob(PredictionQuery(p, 1, 1, 1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(new_species_prob(PredictionQuery(p, 3, 3, 1)) == doctest::Approx(2.0 / 3.5).epsilon(1e-14));
  CHECK(new_species_prob(PredictionQuery(p, 2, 1, 1)) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK_THROWS_AS(new_species_prob(PredictionQuery(p, 2, 1, 2)), DomainError);
}

TEST_CASE("new-species law given their draw count") {
  const PDParams p(0.5, 0.5);
  const Pmf zero = km_given_sm_pmf(p, 1, 0);
  CHECK(zero.support_min() == 0);
  CHECK(zero.prob(0) == 1.0);
  CHECK(km_given_sm_pmf(p, 1, 1).prob(1) == 1.0);
  const Pmf two = km_given_sm_pmf(p, 1, 2);
  CHECK(two.prob(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(two.prob(2) == doctest::Approx(0.75).epsilon(1e-14));
  // same code path as the prior law under the shifted parameter
  for (long s = 1; s <= 25; ++s) {
    const Pmf a = km_given_sm_pmf(PDParams(0.3, 1.2), 4, s);
    const Pmf b = kn_pmf(PDParams(0.3, 1.2 + 4 * 0.3), s);
    CHECK(a.support_min() == b.support_min());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.log_probs()[i] == b.log_probs()[i]);
  }
}

TEST_CASE("new-species law: small cases and the exact oracle") {
  const PDParams p(0.5, 0.5);
  CHECK(km_pmf(PredictionQuery(p, 2, 1, 0)).prob(0) == 1.0);
  const Pmf one = km_pmf(PredictionQuery(p, 2, 1, 1));
  CHECK(one.prob(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(one.prob(1) == doctest::Approx(0.4).epsilon(1e-14));

  const oracle::RationalParams rp(oracle::Rational(1, 2), oracle::Rational(1));
  const std::vector<long> counts{3, 1};
  const auto exact = oracle::exact_km_pmf(rp, counts, 3);
  const Pmf got = km_pmf(PredictionQuery(PDParams(0.5, 1.0), 4, 2, 3));
  for (long x = 0; x <= 3; ++x) CHECK(std::fabs(got.prob(x) - exact.km[x].get_d()) <= 1e-12);
}

TEST_CASE("mixture identity over draws landing in new species") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0, 10.0}) {
      const PDParams p(alpha, theta);
      for (long n : {1L, 3L, 8L, 20L})
        for (long k : {1L, (n + 1) / 2, n})
          for (long m : {1L, 5L, 12L, 20L}) {
            const PredictionQuery q(p, n, k, m);
            const Pmf direct = km_pmf(q);
            const Pmf s = sm_pmf(q);
            std::vector<long double> mix(static_cast<std::size_t>(m) + 1, 0.0L);
            for (long ss = 0; ss <= m; ++ss) {
              const Pmf cond = km_given_sm_pmf(p, k, ss);
              for (long x = cond.support_min(); x <= cond.support_max(); ++x)
                mix[x] += static_cast<long double>(cond.prob(x)) * s.prob(ss);
            }
            for (long x = 0; x <= m; ++x)
              CHECK(rel_err(static_cast<double>(mix[x]), direct.prob(x)) <= 1e-10);
          }
    }
}

TEST_CASE("closed-form mean and moments match the pmf") {
  const PDParams p(0.5, 0.5);
  CHECK(km_mean(PredictionQuery(p, 2, 1, 0)) == 0.0);
  CHECK(km_mean(PredictionQuery(p, 2, 1, 1)) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(km_moment(PredictionQuery(p, 2, 1, 1), 2) == doctest::Approx(0.4).epsilon(1e-13));
  for (int r = 1; r <= 4; ++r) CHECK(km_moment(PredictionQuery(p, 2, 1, 0), r) == 0.0);
  const PredictionQuery q(PDParams(0.5, 1.0), 10, 4, 20);
  CHECK(rel_err(km_mean(q), km_pmf(q).mean()) <= 1e-10);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.05, 0.95), ut(0.0, 8.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = ua(rng);
    const double theta = ut(rng) - 0.9 * alpha;
    const long n = 1 + static_cast<long>(rng() % 30);
    const long k = 1 + static_cast<long>(rng() % n);
    const long m = 1 + static_cast<long>(rng() % 30);
    const PredictionQuery qq(PDParams(alpha, theta), n, k, m);
    CHECK(rel_err(km_moment(qq, 1), km_mean(qq)) <= 1e-10);
    const Pmf pmf = km_pmf(qq);
    for (int r = 1; r <= 4; ++r) CHECK(rel_err(km_moment(qq, r), pmf.moment(r)) <= 1e-9);
  }
}

TEST_CASE("mean is increasing in m and in k") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0}) {
      const PDParams p(alpha, theta);
      for (long k = 1; k <= 10; ++k)
        for (long m = 1; m < 40; ++m)
          CHECK(km_mean(PredictionQuery(p, 10, k, m + 1)) > km_mean(PredictionQuery(p, 10, k, m)));
      for (long m : {1L, 10L, 100L})
        for (long k = 1; k < 10; ++k)
          CHECK(km_mean(PredictionQuery(p, 10, k + 1, m)) > km_mean(PredictionQuery(p, 10, k, m)));
    }
}

TEST_CASE("exact credible intervals") {
  const PDParams p(0.5, 1.0);
  const CredibleInterval none = credible_interval(PredictionQuery(p, 10, 4, 0), 0.9, IntervalMethod::Exact);
  CHECK(none.lo == 0);
  CHECK(none.hi == 0);

  const PredictionQuery small(p, 10, 4, 6);
  const CredibleInterval wide = credible_interval(small, 0.9999, IntervalMethod::Exact);
  CHECK(wide.hi - wide.lo >= 6 - 1);

  const PredictionQuery q(p, 10, 4, 50);
  const Pmf pmf = km_pmf(q);
  const CredibleInterval ci = credible_interval(q, 0.95, IntervalMethod::Exact);
  CHECK(ci.method == IntervalMethod::Exact);
  CHECK(ci.unimodal);
  auto mass = [&](long lo, long hi) {
    long double s = 0;
    for (long x = lo; x <= hi; ++x) s += pmf.prob(x);
    return static_cast<double>(s);
  };
  CHECK(ci.coverage >= 0.95);
  CHECK(ci.coverage == doctest::Approx(mass(ci.lo, ci.hi)).epsilon(1e-12));
  CHECK(mass(ci.lo + 1, ci.hi) < 0.95);
  CHECK(mass(ci.lo, ci.hi - 1) < 0.95);
  // no shorter window reaches the level
  const long width = ci.hi - ci.lo;
  for (long lo = 0; lo + width - 1 <= 50; ++lo) CHECK(mass(lo, lo + width - 1) < 0.95);

  IntervalOptions capped;
  capped.exact_cap = 40;
  CHECK_THROWS_AS(credible_interval(q, 0.95, IntervalMethod::Exact, capped), CapExceeded);
}

TEST_CASE("asymptotic credible intervals") {
  const PredictionQuery q(PDParams(0.5, 1.0), 10, 4, 5000);
  IntervalOptions opts;
  opts.samples = 20000;
  const CredibleInterval a = credible_interval(q, 0.9, IntervalMethod::Asymptotic, opts);
  CHECK(a.method == IntervalMethod::Asymptotic);
  CHECK(a.lo <= a.hi);
  CHECK(a.hi <= 5000);
  const double mean = km_mean(q);
  CHECK(a.lo < mean);
  CHECK(a.hi > mean);
  const CredibleInterval b = credible_interval(q, 0.9, IntervalMethod::Asymptotic, opts);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  opts.samples = 50;
  CHECK_THROWS_AS(credible_interval(q, 0.999, IntervalMethod::Asymptotic, opts), SamplingError);
}

TEST_CASE("row cache is safe under concurrent readers") {
  clear_row_cache();
  const PredictionQuery q(PDParams(0.4, 0.7), 12, 5, 300);
  const Pmf ref = km_pmf(q);
  std::vector<std::thread> pool;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      const Pmf got = km_pmf(q);
      ok[t] = got.log_probs() == ref.log_probs();
    });
  for (auto& th : pool) th.join();
  for (int v : ok) CHECK(v == 1);
}
