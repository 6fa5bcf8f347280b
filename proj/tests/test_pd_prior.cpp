#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pdrich/errors.hpp"
#include "pdrich/oracle.hpp"
#include "pdrich/pd_prior.hpp"
#include "test_util.hpp"

using namespace pdrich;
using testutil::rel_err;

TEST_CASE("parameter domain") {
  CHECK_NOTHROW(PDParams(0.5, -0.49));
  CHECK_THROWS_AS(PDParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(PDParams(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PDParams(0.5, -0.5), DomainError);
  CHECK_THROWS_AS(PartitionData({2, 0}), DomainError);
  CHECK_THROWS_AS(PartitionData(std::vector<long>{}), DomainError);
}

TEST_CASE("eppf values") {
  const PDParams p(0.5, 0.5);
  CHECK(eppf_log(p, PartitionData({1})) == 0.0);
  CHECK(eppf_log(p, PartitionData({2, 1, 1})) == doctest::Approx(-2.8622008809294684).epsilon(1e-13));
  CHECK(eppf_log(p, PartitionData({1, 1})) == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("eppf addition rule over all set partitions") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0}) {
      const PDParams p(alpha, theta);
      for (int n = 1; n <= 8; ++n) {
        long double total = 0;
        oracle::enumerate_partitions(n, [&](std::span<const int> rgs) {
          std::vector<long> counts;
          for (int b : rgs) {
            if (b >= static_cast<int>(counts.size())) counts.resize(b + 1, 0);
            ++counts[b];
          }
          total += std::exp(static_cast<long double>(eppf_log(p, PartitionData(counts))));
        });
        CHECK(std::fabs(static_cast<double>(total) - 1.0) < 1e-12);
      }
    }
}

TEST_CASE("prior block-count law") {
  const PDParams p(0.5, 0.5);
  const Pmf one = kn_pmf(p, 1);
  CHECK(one.support_min() == 1);
  CHECK(one.size() == 1);
  CHECK(one.prob(1) == doctest::Approx(1.0));
  const Pmf two = kn_pmf(p, 2);
  CHECK(two.prob(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(two.prob(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const oracle::RationalParams rp(oracle::Rational(1, 2), oracle::Rational(1, 2));
  const auto exact = oracle::exact_kn_pmf(rp, 4);
  const Pmf four = kn_pmf(p, 4);
  for (long k = 1; k <= 4; ++k) CHECK(std::fabs(four.prob(k) - exact[k].get_d()) <= 1e-12);
}

TEST_CASE("normalization across the parameter grid") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0, 10.0})
      for (long n : {1L, 2L, 5L, 17L, 50L, 120L, 200L})
        CHECK(std::fabs(kn_pmf(PDParams(alpha, theta), n).total() - 1.0) <= 1e-10);
}

TEST_CASE("backward recursion on the weights") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0, 10.0}) {
      const PDParams p(alpha, theta);
      for (long n = 1; n <= 100; ++n)
        for (long k = 1; k <= n; ++k) {
          const double lhs = log_weight(p, n, k);
          const double a = std::log(static_cast<double>(n) - k * alpha) + log_weight(p, n + 1, k);
          const double b = log_weight(p, n + 1, k + 1);
          const double rhs = std::max(a, b) + std::log1p(std::exp(-std::fabs(a - b)));
          CHECK(std::fabs(std::expm1(rhs - lhs)) <= 1e-12);
        }
    }
}

TEST_CASE("mean and moments") {
  const PDParams p(0.5, 0.5);
  CHECK(kn_mean(p, 1) == doctest::Approx(1.0));
  CHECK(kn_mean(p, 2) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(rel_err(kn_mean(p, 10), kn_pmf(p, 10).mean()) <= 1e-10);
  CHECK(kn_moment(p, 2, 2) == doctest::Approx(3.0).epsilon(1e-13));
  for (int r = 1; r <= 4; ++r) CHECK(kn_moment(p, 1, r) == doctest::Approx(1.0).epsilon(1e-13));
  for (double alpha : {0.25, 0.5, 0.75})
    for (double theta : {-0.1, 0.5, 2.0, 10.0}) {
      const PDParams q(alpha, theta);
      for (long n = 1; n <= 30; ++n) CHECK(rel_err(kn_moment(q, n, 1), kn_mean(q, n)) <= 1e-10);
      for (long n : {2L, 7L, 25L, 50L}) {
        const Pmf pmf = kn_pmf(q, n);
        for (int r = 1; r <= 4; ++r) CHECK(rel_err(kn_moment(q, n, r), pmf.moment(r)) <= 1e-9);
      }
    }
}

TEST_CASE("fit: dominance over the grid and a fixed point") {
  const PartitionData data({2, 1, 1});
  const FitResult fit = fit_params(data);
  CHECK(fit.log_likelihood >= eppf_log(PDParams(0.5, 0.5), data));
  CHECK(fit.log_likelihood >= fit.best_grid_log_likelihood);
  CHECK(fit.log_likelihood == doctest::Approx(eppf_log(fit.params, data)).epsilon(1e-12));
}

TEST_CASE("fit: all singletons drive the search to the boundary") {
  const PartitionData data(std::vector<long>(20, 1));
  const FitResult fit = fit_params(data);
  CHECK(fit.on_boundary);
  const bool upper = std::find(fit.boundary_edges.begin(), fit.boundary_edges.end(), "theta_hi") !=
                         fit.boundary_edges.end() ||
                     std::find(fit.boundary_edges.begin(), fit.boundary_edges.end(), "alpha_hi") !=
                         fit.boundary_edges.end();
  CHECK(upper);
  for (std::size_t i = 1; i < fit.path.size(); ++i) CHECK(fit.path[i] >= fit.path[i - 1]);
}

TEST_CASE("fit: permutation invariance and unidentifiable input") {
  const FitResult a = fit_params(PartitionData({5, 1, 3, 1, 2, 8}));
  const FitResult b = fit_params(PartitionData({1, 8, 2, 5, 1, 3}));
  CHECK(a.params.alpha() == doctest::Approx(b.params.alpha()).epsilon(1e-9));
  CHECK(a.params.theta() == doctest::Approx(b.params.theta()).epsilon(1e-9));
  CHECK_THROWS_AS(fit_params(PartitionData({7})), Unidentifiable);
}
