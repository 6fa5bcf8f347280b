#include "pdrich/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "pdrich/errors.hpp"
#include "pdrich/stirling.hpp"

namespace pdrich {

namespace {

constexpr double kQuadTol = 1e-10;

void check_quadrature(double value, double err, double l1, const char* what) {
  if (!std::isfinite(value) || err > 1e-7 * std::max(l1, 1e-300))
    throw QuadratureError(std::string(what) + " quadrature did not converge (error " +
                          std::to_string(err) + ")");
}

}  // namespace

LimitLaw::LimitLaw(double alpha, double theta, long n, long k)
    : alpha_(alpha), theta_(theta), n_(n), k_(k) {
  PDParams check(alpha, theta);
  (void)check;
  if (n < 1 || k < 1 || k > n) throw DomainError("limit law needs 1 <= k <= n");
}

LimitLaw::LimitLaw(const PDParams& params, long n, long k)
    : LimitLaw(params.alpha(), params.theta(), n, k) {}

double limit_moment(const LimitLaw& law, int r) {
  if (r < 0) throw DomainError("moment order must be nonnegative");
  if (r == 0) return 1.0;
  const double a = law.alpha();
  const double base = law.theta() + static_cast<double>(law.n());
  return std::exp(log_rising_factorial(law.new_mass() / a, r) + std::lgamma(base) -
                  std::lgamma(base + r * a));
}

double alt_decomposition_moment(const LimitLaw& law, int r) {
  if (r < 0) throw DomainError("moment order must be nonnegative");
  if (r == 0) return 1.0;
  const double a = law.alpha();
  const double tilt = law.theta() + static_cast<double>(law.n());
  const double y1 = tilted_ml_moment(a, tilt, r);
  const double bx = law.theta() / a + static_cast<double>(law.k());
  const double by = static_cast<double>(law.n()) / a - static_cast<double>(law.k());
  const double x = std::exp(std::lgamma(bx + r) - std::lgamma(bx) + std::lgamma(bx + by) -
                            std::lgamma(bx + by + r));
  return y1 * x;
}

double km_moment_asymptotic(const LimitLaw& law, int r, long m) {
  if (r < 1) throw DomainError("moment order must be >= 1");
  if (m < 1) throw DomainError("m must be >= 1");
  return limit_moment(law, r) * std::pow(static_cast<double>(m), r * law.alpha());
}

double sm_local_density(const LimitLaw& law, long m, double s) {
  if (m < 1) throw DomainError("m must be >= 1");
  if (!(s > 0.0 && s < static_cast<double>(m))) throw DomainError("s must lie in (0, m)");
  const double a = law.new_mass(), b = law.old_mass();
  const double md = static_cast<double>(m);
  const double lc = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return std::exp(lc + (a - 1.0) * std::log(s) + (b - 1.0) * std::log(md - s) -
                  (a + b - 1.0) * std::log(md));
}

std::vector<double> sm_local_cell_probs(const LimitLaw& law, long m) {
  if (m < 1) throw DomainError("m must be >= 1");
  const double a = law.new_mass(), b = law.old_mass();
  const double md = static_cast<double>(m);
  std::vector<double> out(static_cast<std::size_t>(m) + 1);
  double prev = 0.0;
  for (long s = 0; s <= m; ++s) {
    const double edge = std::min(1.0, (static_cast<double>(s) + 0.5) / md);
    const double cdf = s == m ? 1.0 : boost::math::ibeta(a, b, edge);
    out[s] = cdf - prev;
    prev = cdf;
  }
  return out;
}

double limit_density(const LimitLaw& law, double z) {
  if (!(z > 0.0)) throw DomainError("limit density needs z > 0");
  const double a = law.alpha();
  const double theta = law.theta();
  const double n = static_cast<double>(law.n()), k = static_cast<double>(law.k());
  const double b = law.old_mass();
  const double log_c = std::lgamma(theta + n) - std::lgamma(theta / a + k) - std::lgamma(b) -
                       std::log(a) + (theta / a + k - 1.0) * std::log(z);
  // v = z e^y, dv = v dy
  auto integrand = [&](double y) -> double {
    if (y <= 0.0) return 0.0;
    const double log_v = std::log(z) + y;
    const double one_minus = -std::expm1(-y / a);  // 1 - (z/v)^{1/alpha}
    const double log_x = -log_v / a;               // v^{-1/alpha}
    if (log_x < -700.0) return 0.0;
    const double lf = log_stable_density(a, std::exp(log_x));
    const double l = log_c + (b - 1.0) * std::log(one_minus) + lf + (-1.0 / a - 1.0) * log_v + log_v;
    return std::exp(l);
  };
  // Most of the mass sits near v = 1, i.e. y = -log z; for small z the range is split
  // there so neither rule has to find a distant bump.
  const double y0 = -1.0 - std::log(z);
  boost::math::quadrature::exp_sinh<double> tail;
  double err = 0.0, l1 = 0.0;
  if (y0 <= 1.0) {
    const double v = tail.integrate(integrand, kQuadTol, &err, &l1);
    check_quadrature(v, err, l1, "limit density");
    return v;
  }
  boost::math::quadrature::tanh_sinh<double> head;
  double err_head = 0.0, l1_head = 0.0;
  const double v = head.integrate(integrand, 0.0, y0, kQuadTol, &err_head, &l1_head) +
                   tail.integrate(integrand, y0, std::numeric_limits<double>::infinity(),
                                  kQuadTol, &err, &l1);
  check_quadrature(v, err + err_head, l1 + l1_head, "limit density");
  return v;
}

double limit_density_beta_mixture(const LimitLaw& law, double z) {
  if (!(z > 0.0)) throw DomainError("limit density needs z > 0");
  const double a = law.alpha();
  const double tilt = law.new_mass();
  const double ba = law.new_mass(), bb = law.old_mass();
  const double lc_y = std::lgamma(tilt + 1.0) - std::lgamma(tilt / a + 1.0);
  const double lc_w = std::lgamma(ba + bb) - std::lgamma(ba) - std::lgamma(bb);
  // tanh_sinh passes the signed distance to the nearer endpoint: a - w on the left half
  // and b - w on the right, so 1 - w is exact only on the right.
  auto integrand = [&](double w, double dist) -> double {
    const double wc = dist > 0.0 ? dist : 1.0 - w;
    if (w <= 0.0 || wc <= 0.0) return 0.0;
    const double log_w = std::log(w);
    const double log_y = std::log(z) - a * log_w;
    const double l = lc_y + tilt / a * log_y + log_ml_density(a, std::exp(log_y)) - a * log_w +
                     lc_w + (ba - 1.0) * log_w + (bb - 1.0) * std::log(wc);
    return std::exp(l);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(integrand, 0.0, 1.0, kQuadTol, &err, &l1);
  check_quadrature(v, err, l1, "limit density (Beta mixture)");
  return v;
}

std::vector<double> sample_limit(const LimitLaw& law, long count, std::uint64_t seed,
                                 const SamplerOptions& opts) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  const double a = law.alpha();
  const bool product = opts.decomposition == Decomposition::Product;
  const double tilt = product ? law.new_mass() : law.theta() + static_cast<double>(law.n());
  const double beta_a = product ? law.new_mass() : law.theta() / a + static_cast<double>(law.k());
  const double beta_b = product ? law.old_mass()
                                : static_cast<double>(law.n()) / a - static_cast<double>(law.k());
  const double power = product ? a : 1.0;
  const TiltedMittagLefflerSampler ml(a, tilt, opts.min_acceptance);

  constexpr long kChunk = 4096;
  const long chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> out(static_cast<std::size_t>(count));
  auto run_chunk = [&](long c) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(c));
    const long end = std::min(count, (c + 1) * kChunk);
    for (long i = c * kChunk; i < end; ++i) {
      const double y = ml(rng);
      const double w = beta_draw(rng, beta_a, beta_b);
      out[i] = y * std::pow(w, power);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, chunks));
  if (threads == 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (long c = t; c < chunks; c += threads) run_chunk(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace pdrich
