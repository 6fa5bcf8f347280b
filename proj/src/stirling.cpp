#include "pdrich/stirling.hpp"

#include <cmath>
#include <string>

namespace pdrich {

namespace {

// Above this length the product loops switch to lgamma differences.
constexpr long kLoopLimit = 1L << 20;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
}

void require_size(long n) {
  if (n < 0) throw DomainError("table size must be nonnegative");
}

// row <- next row of S(j+1,k) = S(j,k-1) + (j + shift - k*alpha) S(j,k).
// row holds j+1 entries on entry and j+2 on exit.
void advance_first_kind(std::vector<LogValue>& row, long j, double alpha, double shift) {
  row.push_back(LogValue::zero());
  for (long k = j + 1; k >= 0; --k) {
    LogValue carried = k > 0 ? row[k - 1] : LogValue::zero();
    double w = static_cast<double>(j) + shift - static_cast<double>(k) * alpha;
    LogValue stay = (w > 0.0 && !row[k].is_zero())
                        ? LogValue::from_log(row[k].log() + std::log(w))
                        : LogValue::zero();
    row[k] = carried + stay;
  }
}

LogTable build_first_kind(StirlingFamily fam, long nmax, double alpha, double shift) {
  LogTable t(fam, nmax, alpha, shift);
  std::vector<LogValue> row{LogValue::one()};
  t.mutable_row(0)[0] = LogValue::one();
  for (long j = 0; j < nmax; ++j) {
    advance_first_kind(row, j, alpha, shift);
    auto dst = t.mutable_row(j + 1);
    for (long k = 0; k <= j + 1; ++k) dst[k] = row[k];
  }
  return t;
}

}  // namespace

SignedLogValue rising_factorial(double x, long b) {
  if (b < 0) throw DomainError("rising factorial length must be nonnegative");
  if (b == 0) return {LogValue::one(), 1};
  if (x > 0.0) return {LogValue::from_log(log_rising_factorial(x, b)), 1};
  int sign = 1;
  double acc = 0.0;
  for (long i = 0; i < b; ++i) {
    double t = x + static_cast<double>(i);
    if (t == 0.0) return {};
    if (t > 0.0) {
      acc += log_rising_factorial(t, b - i);
      break;
    }
    sign = -sign;
    acc += std::log(-t);
  }
  return {LogValue::from_log(acc), sign};
}

SignedLogValue gen_rising_factorial(double x, long s, double alpha) {
  if (s < 0) throw DomainError("rising factorial length must be nonnegative");
  if (s == 0) return {LogValue::one(), 1};
  if (x > 0.0 && alpha > 0.0)
    return {LogValue::from_log(log_gen_rising_factorial(x, s, alpha)), 1};
  int sign = 1;
  double acc = 0.0;
  for (long i = 0; i < s; ++i) {
    double t = x + static_cast<double>(i) * alpha;
    if (t == 0.0) return {};
    if (t < 0.0) sign = -sign;
    acc += std::log(std::fabs(t));
  }
  return {LogValue::from_log(acc), sign};
}

double log_rising_factorial(double x, long b) {
  if (b <= kLoopLimit) {
    double acc = 0.0;
    for (long i = 0; i < b; ++i) acc += std::log(x + static_cast<double>(i));
    return acc;
  }
  return std::lgamma(x + static_cast<double>(b)) - std::lgamma(x);
}

double log_rising_ratio(double a, double b, long m) {
  if (m <= kLoopLimit) {
    double acc = 0.0;
    const double d = a - b;
    for (long i = 0; i < m; ++i) acc += std::log1p(d / (b + static_cast<double>(i)));
    return acc;
  }
  const double md = static_cast<double>(m);
  return (std::lgamma(a + md) - std::lgamma(b + md)) - (std::lgamma(a) - std::lgamma(b));
}

double log_gen_rising_factorial(double x, long s, double alpha) {
  if (s <= kLoopLimit) {
    double acc = 0.0;
    for (long i = 0; i < s; ++i) acc += std::log(x + static_cast<double>(i) * alpha);
    return acc;
  }
  return static_cast<double>(s) * std::log(alpha) + log_rising_factorial(x / alpha, s);
}

std::vector<double> log_rising_prefix(double x, long len) {
  std::vector<double> out(static_cast<std::size_t>(len) + 1, 0.0);
  for (long j = 0; j < len; ++j) out[j + 1] = out[j] + std::log(x + static_cast<double>(j));
  return out;
}

std::vector<double> log_gen_rising_prefix(double x, long len, double alpha) {
  std::vector<double> out(static_cast<std::size_t>(len) + 1, 0.0);
  for (long j = 0; j < len; ++j)
    out[j + 1] = out[j] + std::log(x + static_cast<double>(j) * alpha);
  return out;
}

LogTable::LogTable(StirlingFamily family, long nmax, double alpha, double shift)
    : family_(family), nmax_(nmax), alpha_(alpha), shift_(shift),
      cells_(index(nmax + 1, 0), LogValue::zero()) {}

LogTable stirling1_table(long nmax, double alpha) {
  require_alpha(alpha);
  require_size(nmax);
  return build_first_kind(StirlingFamily::FirstKind, nmax, alpha, 0.0);
}

LogTable noncentral_stirling1_table(long mmax, double alpha, double r) {
  require_alpha(alpha);
  require_size(mmax);
  if (!(r > 0.0)) throw DomainError("non-central shift r must be positive");
  return build_first_kind(StirlingFamily::NoncentralFirstKind, mmax, alpha, r);
}

LogTable noncentral_stirling1_by_convolution(long mmax, double alpha, double r) {
  require_alpha(alpha);
  require_size(mmax);
  if (!(r > 0.0)) throw DomainError("non-central shift r must be positive");
  const LogTable central = stirling1_table(mmax, alpha);
  const auto log_r = log_rising_prefix(r, mmax);
  std::vector<double> log_fact(static_cast<std::size_t>(mmax) + 1, 0.0);
  for (long i = 1; i <= mmax; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));

  LogTable t(StirlingFamily::NoncentralFirstKind, mmax, alpha, r);
  for (long m = 0; m <= mmax; ++m) {
    auto row = t.mutable_row(m);
    for (long k = 0; k <= m; ++k) {
      LogValue acc;
      for (long s = k; s <= m; ++s) {
        LogValue c = central.at(s, k);
        if (c.is_zero()) continue;
        double lc = log_fact[m] - log_fact[s] - log_fact[m - s];
        acc += LogValue::from_log(lc + log_r[m - s]) * c;
      }
      row[k] = acc;
    }
  }
  return t;
}

LogTable noncentral_stirling2_table(long rmax, double gamma) {
  require_size(rmax);
  if (!(gamma > 0.0)) throw DomainError("second-kind shift gamma must be positive");
  LogTable t(StirlingFamily::NoncentralSecondKind, rmax, 0.0, gamma);
  t.mutable_row(0)[0] = LogValue::one();
  for (long n = 0; n < rmax; ++n) {
    auto prev = t.row(n);
    auto next = t.mutable_row(n + 1);
    for (long k = 0; k <= n + 1; ++k) {
      LogValue v = k > 0 ? prev[k - 1] : LogValue::zero();
      if (k <= n) v += LogValue::from_log(std::log(static_cast<double>(k) + gamma)) * prev[k];
      next[k] = v;
    }
  }
  return t;
}

std::vector<LogValue> stirling1_row(long n, double alpha) {
  require_alpha(alpha);
  require_size(n);
  std::vector<LogValue> row{LogValue::one()};
  row.reserve(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j < n; ++j) advance_first_kind(row, j, alpha, 0.0);
  return row;
}

std::vector<LogValue> noncentral_stirling1_row(long m, double alpha, double r) {
  require_alpha(alpha);
  require_size(m);
  if (!(r > 0.0)) throw DomainError("non-central shift r must be positive");
  std::vector<LogValue> row{LogValue::one()};
  row.reserve(static_cast<std::size_t>(m) + 1);
  for (long j = 0; j < m; ++j) advance_first_kind(row, j, alpha, r);
  return row;
}

}  // namespace pdrich
