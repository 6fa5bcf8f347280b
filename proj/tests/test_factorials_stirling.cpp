#include <doctest.h>

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pdrich/stirling.hpp"
#include "test_util.hpp"

using namespace pdrich;
using testutil::rel_err;

TEST_CASE("log values: zero sentinel and overflow-free sums") {
  const LogValue z = LogValue::zero();
  CHECK(z == LogValue::zero());
  CHECK(z.is_zero());
  CHECK((z * LogValue::from_log(500.0)).is_zero());
  CHECK((z + LogValue::from_value(3.0)).value() == doctest::Approx(3.0));
  const LogValue big = LogValue::from_log(800.0);
  CHECK((big + big).log() == doctest::Approx(800.0 + std::log(2.0)));
  const auto d = SignedLogValue::from_value(5.0) + SignedLogValue::from_value(-3.0);
  CHECK(d.value() == doctest::Approx(2.0));
}

TEST_CASE("rising factorials") {
  CHECK(rising_factorial(7.3, 0).value() == 1.0);
  CHECK(rising_factorial(2.0, 3).value() == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(rising_factorial(1.5, 3).value() == doctest::Approx(13.125).epsilon(1e-14));
  CHECK(rising_factorial(-2.5, 3).value() == doctest::Approx(-2.5 * -1.5 * -0.5).epsilon(1e-14));
  CHECK(rising_factorial(-2.0, 4).value() == 0.0);
  CHECK(log_rising_factorial(0.5, 200) ==
        doctest::Approx(std::lgamma(200.5) - std::lgamma(0.5)).epsilon(1e-13));
}

TEST_CASE("generalized rising factorials") {
  CHECK(gen_rising_factorial(4.2, 0, 0.3).value() == 1.0);
  CHECK(gen_rising_factorial(1.0, 3, 0.5).value() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(gen_rising_factorial(2.0, 3, 1.0).value() == doctest::Approx(24.0).epsilon(1e-14));
  // (x)_{s,alpha} = alpha^s (x/alpha)_s
  for (double x : {0.3, 1.7, 4.0})
    for (long s : {1L, 5L, 12L})
      CHECK(rel_err(gen_rising_factorial(x, s, 0.4).value(),
                    std::pow(0.4, s) * rising_factorial(x / 0.4, s).value()) < 1e-13);
}

TEST_CASE("first-kind table: base cases and small values") {
  const LogTable t = stirling1_table(3, 0.5);
  CHECK(t.at(0, 0).value() == 1.0);
  CHECK(t.at(1, 1).value() == 1.0);
  CHECK(t.at(1, 0).is_zero());
  CHECK(t.at(2, 3).is_zero());
  CHECK(t.at(3, 2).value() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(t.at(3, 1).value() == doctest::Approx(0.75).epsilon(1e-14));
  // 24 = S31*2 + S32*(2*2.5) + S33*(2*2.5*3)
  const double rhs = t.at(3, 1).value() * 2 + t.at(3, 2).value() * 5 + t.at(3, 3).value() * 15;
  CHECK(rhs == doctest::Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(stirling1_table(4, 1.0), DomainError);
  CHECK_THROWS_AS(stirling1_table(4, 0.0), DomainError);
}

TEST_CASE("first-kind connection identity on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  for (double alpha : {0.25, 0.5, 0.75}) {
    const LogTable t = stirling1_table(15, alpha);
    for (int trial = 0; trial < 20; ++trial) {
      const double x = ux(rng);
      for (long n = 0; n <= 15; ++n) {
        SignedLogValue sum = SignedLogValue::from_value(0.0);
        for (long k = 0; k <= n; ++k) sum = sum + gen_rising_factorial(x, k, alpha) * t.at(n, k);
        CHECK(rel_err(sum.value(), rising_factorial(x, n).value()) <= 1e-10);
      }
    }
  }
}

TEST_CASE("non-central first kind: small values and both constructions agree") {
  const double r = 0.8;
  const LogTable t = noncentral_stirling1_table(2, 0.5, r);
  CHECK(t.at(1, 0).value() == doctest::Approx(r).epsilon(1e-14));
  CHECK(t.at(1, 1).value() == 1.0);
  CHECK(noncentral_stirling1_table(2, 0.5, 1.5).at(2, 1).value() ==
        doctest::Approx(3.5).epsilon(1e-14));
  for (double alpha : {0.25, 0.5, 0.75})
    for (double shift : {0.25, 1.5, 7.0}) {
      const LogTable rec = noncentral_stirling1_table(20, alpha, shift);
      const LogTable conv = noncentral_stirling1_by_convolution(20, alpha, shift);
      for (long m = 0; m <= 20; ++m) {
        for (long k = 0; k <= m; ++k)
          CHECK(rel_err(conv.at(m, k).value(), rec.at(m, k).value()) <= 1e-12);
        const auto row = noncentral_stirling1_row(m, alpha, shift);
        for (long k = 0; k <= m; ++k) CHECK(rel_err(row[k].value(), rec.at(m, k).value()) <= 1e-12);
      }
    }
  CHECK_THROWS_AS(noncentral_stirling1_table(3, 0.5, 0.0), DomainError);
}

TEST_CASE("second-kind table: small values and the falling-factorial identity") {
  const LogTable one = noncentral_stirling2_table(2, 1.0);
  CHECK(one.at(1, 0).value() == doctest::Approx(1.0));
  CHECK(one.at(1, 1).value() == 1.0);
  CHECK(one.at(2, 1).value() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(noncentral_stirling2_table(2, 2.0).at(2, 0).value() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(noncentral_stirling2_table(3, 0.0), DomainError);

  // The identity cancels badly near x = 0 in double precision, so it is checked on the
  // 50-digit values the moment formulas consume; the log table must match those entrywise.
  using Big = boost::multiprecision::cpp_bin_float_50;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-4.0, 6.0);
  for (double gamma : {0.5, 1.0, 2.0}) {
    const auto big = noncentral_stirling2_values<Big>(10, Big(gamma));
    const LogTable t = noncentral_stirling2_table(10, gamma);
    for (long n = 0; n <= 10; ++n)
      for (long k = 0; k <= n; ++k)
        CHECK(rel_err(t.at(n, k).value(), static_cast<double>(big[n][k])) <= 1e-13);
    for (int trial = 0; trial < 20; ++trial) {
      const Big x(ux(rng));
      for (long n = 0; n <= 10; ++n) {
        Big sum = 0, falling = 1;
        for (long k = 0; k <= n; ++k) {
          sum += big[n][k] * falling;
          falling *= x - gamma - k;
        }
        const Big want = boost::multiprecision::pow(x, n);
        CHECK(static_cast<double>(abs(sum - want) / abs(want)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("table shape invariants") {
  const LogTable t = stirling1_table(60, 0.3);
  for (long n = 0; n <= 60; ++n) {
    CHECK(t.at(n, n).value() == 1.0);
    for (long k = 0; k <= n; ++k) CHECK(t.at(n, k).value() >= 0.0);
  }
  // rows stay finite where doubles would overflow
  const auto row = stirling1_row(400, 0.5);
  CHECK(std::isfinite(row[1].log()));
  CHECK(row[1].log() > 700.0);
}
