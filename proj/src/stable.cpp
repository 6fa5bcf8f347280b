#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdrich/asymptotics.hpp"
#include "pdrich/errors.hpp"

namespace pdrich {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
}

// Zolotarev's function A(u) = sin(a u)^{a/(1-a)} sin((1-a) u) / sin(u)^{1/(1-a)},
// increasing on (0, pi) from A(0+) = a^{a/(1-a)} (1-a) to infinity.
struct Zolotarev {
  double a;

  double log_a0() const { return a / (1.0 - a) * std::log(a) + std::log1p(-a); }
  double log_a(double u) const {
    const double su = u <= 0.5 * kPi ? std::sin(u) : std::sin(kPi - u);
    return a / (1.0 - a) * std::log(std::sin(a * u)) + std::log(std::sin((1.0 - a) * u)) -
           std::log(su) / (1.0 - a);
  }
  // log(A(u) / A(0+)) through sinc factors, free of cancellation near u = 0
  double log_ratio(double u) const {
    auto log_sinc = [](double v) { return v == 0.0 ? 0.0 : std::log(std::sin(v) / v); };
    const double su = u <= 0.5 * kPi ? std::sin(u) : std::sin(kPi - u);
    return a / (1.0 - a) * log_sinc(a * u) + log_sinc((1.0 - a) * u) -
           std::log(su / u) / (1.0 - a);
  }
  // log A(pi - w), accurate for small w
  double log_a_reflected(double w) const {
    return a / (1.0 - a) * std::log(std::sin(a * (kPi - w))) +
           std::log(std::sin((1.0 - a) * (kPi - w))) - std::log(std::sin(w)) / (1.0 - a);
  }
};

// Bisection for the point where a monotone function crosses target.
template <class F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = f(mid) < target;
    if (below == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Adaptive Gauss-Kronrod over several pieces; accuracy is judged on the sum, since a
// narrow piece may carry a negligible share of the mass.
class PiecewiseIntegral {
 public:
  template <class F>
  void add(F&& f, double lo, double hi) {
    if (!(hi > lo)) return;
    double err = 0.0, l1 = 0.0;
    value_ += gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12, &err, &l1);
    err_ += err;
    l1_ += l1;
  }

  double value() const {
    if (!std::isfinite(value_) || err_ > 1e-9 * std::max(l1_, 1e-300)) {
      std::ostringstream msg;
      msg << "stable density quadrature did not converge (relative error "
          << err_ / std::max(l1_, 1e-300) << ")";
      throw QuadratureError(msg.str());
    }
    return value_;
  }

 private:
  double value_ = 0.0, err_ = 0.0, l1_ = 0.0;
};

// Beyond this value of x^{-a/(1-a)} A(0+) the density is below e^{-700}; the integrand
// is then a spike of width ~ (c A0)^{-1/2} at u = 0 that double precision cannot resolve.
constexpr double kLaplaceThreshold = 700.0;

// log f(x) by Zolotarev's integral
//   f(x) = a/(1-a) x^{-1/(1-a)} / pi  int_0^pi A(u) exp(-x^{-a/(1-a)} A(u)) du,
// evaluated around the mode of the integrand so that sharp peaks are resolved.
double log_stable_zolotarev(double a, double log_x) {
  const Zolotarev z{a};
  const double log_c = -a / (1.0 - a) * log_x;
  const double c = std::exp(log_c);
  if (!std::isfinite(c)) return kNegInf;
  const double la0 = z.log_a0();
  const double a0 = std::exp(la0);
  if (c * a0 > kLaplaceThreshold) {
    // Laplace at u = 0 with log A(u) = log A0 + a u^2 / 2 + O(u^4):
    //   int A e^{-c A} du ~ A0 e^{-c A0} sqrt(pi / (2 a c A0))
    return std::log(a / (1.0 - a)) - log_x / (1.0 - a) - std::log(kPi) + la0 - c * a0 +
           0.5 * std::log(kPi / (2.0 * a * c * a0));
  }
  // log integrand with exp(-c A0) factored out, in u and in t = log(pi - u)
  auto h_of = [&](double la) { return la - c * a0 * std::expm1(la - la0); };
  auto h = [&](double u) {
    const double d = z.log_ratio(u);
    return la0 + d - c * a0 * std::expm1(d);
  };
  auto ht = [&](double t) { return h_of(z.log_a_reflected(std::exp(t))); };

  // Near pi the integrand varies on the scale of pi - u, so (pi/2, pi) is integrated
  // in t; (0, pi/2] is smooth in u. Break points carry both coordinates.
  struct Point {
    double u, t;
  };
  const double t_lo = std::log(1e-300), t_pi = std::log(kPi);
  Point mode{0.0, t_pi};
  if (c * a0 < 1.0) {
    mode.t = bisect([&](double t) { return z.log_a_reflected(std::exp(t)); }, t_lo, t_pi, -log_c,
                    false);
    mode.u = kPi - std::exp(mode.t);
  }
  const double peak = mode.u > 0.0 ? ht(mode.t) : la0;
  const double target = peak - 60.0;

  Point right{kPi, t_lo};
  if (ht(t_lo) < target) {
    right.t = bisect(ht, t_lo, mode.t, target, true);
    right.u = kPi - std::exp(right.t);
  }
  Point left{0.0, t_pi};
  if (mode.u > 0.0 && h(std::min(1e-8, 0.5 * mode.u)) < target) {
    left.t = bisect(ht, mode.t, t_pi, target, false);
    left.u = kPi - std::exp(left.t);
  }
  std::vector<Point> points{left, mode, right};
  const Point half{0.5 * kPi, std::log(0.5 * kPi)};
  if (left.u < half.u && half.u < right.u) points.push_back(half);
  std::sort(points.begin(), points.end(), [](const Point& p, const Point& q) { return p.u < q.u; });

  auto g = [&](double u) { return std::exp(h(u) - peak); };
  auto gt = [&](double t) { return std::exp(ht(t) - peak + t); };
  PiecewiseIntegral integral;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Point& p = points[i];
    const Point& q = points[i + 1];
    if (q.u <= half.u)
      integral.add(g, p.u, q.u);
    else
      integral.add(gt, q.t, p.t);
  }
  const double total = integral.value();
  return std::log(a / (1.0 - a)) - log_x / (1.0 - a) - c * a0 - std::log(kPi) + peak +
         std::log(total);
}

// Right-tail series f(x) = 1/pi sum_k (-1)^{k+1} Gamma(k a + 1)/k! sin(k pi a) x^{-k a - 1}.
double log_stable_series(double a, double log_x) {
  const double log_y = -a * log_x;
  double sum = 0.0;
  for (int k = 1; k < 400; ++k) {
    const double mag = std::exp(std::lgamma(k * a + 1.0) - std::lgamma(k + 1.0) + k * log_y);
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * mag * std::sin(k * kPi * a);
    sum += term;
    if (k >= 2 && mag < 1e-18 * std::fabs(sum)) break;
  }
  return std::log(sum) - std::log(kPi) - log_x;
}

// Threshold on x^{-alpha} below which the series converges fast.
constexpr double kSeriesThreshold = 0.01;

double log_stable_from_log_x(double a, double log_x) {
  if (a == 0.5) {
    const double x = std::exp(log_x);
    return -1.5 * log_x - 0.25 / x - std::log(2.0 * std::sqrt(kPi));
  }
  if (-a * log_x < std::log(kSeriesThreshold)) return log_stable_series(a, log_x);
  return log_stable_zolotarev(a, log_x);
}

}  // namespace

double log_stable_density(double alpha, double x) {
  require_alpha(alpha);
  if (!(x > 0.0)) throw DomainError("stable density needs x > 0");
  return log_stable_from_log_x(alpha, std::log(x));
}

double stable_density(double alpha, double x) { return std::exp(log_stable_density(alpha, x)); }

double stable_density_zolotarev(double alpha, double x) {
  require_alpha(alpha);
  if (!(x > 0.0)) throw DomainError("stable density needs x > 0");
  return std::exp(log_stable_zolotarev(alpha, std::log(x)));
}

double log_ml_density(double alpha, double z) {
  require_alpha(alpha);
  if (!(z > 0.0)) throw DomainError("Mittag-Leffler density needs z > 0");
  const double log_z = std::log(z);
  const double log_x = -log_z / alpha;
  return -std::log(alpha) - (1.0 + 1.0 / alpha) * log_z + log_stable_from_log_x(alpha, log_x);
}

double ml_density(double alpha, double z) { return std::exp(log_ml_density(alpha, z)); }

double tilted_ml_density(double alpha, double tilt, double z) {
  if (!(tilt > -alpha)) throw DomainError("tilt must exceed -alpha");
  const double lc = std::lgamma(tilt + 1.0) - std::lgamma(tilt / alpha + 1.0);
  return std::exp(lc + tilt / alpha * std::log(z) + log_ml_density(alpha, z));
}

double tilted_ml_moment(double alpha, double tilt, double r) {
  if (!(tilt > -alpha)) throw DomainError("tilt must exceed -alpha");
  return std::exp(std::lgamma(tilt + 1.0) + std::lgamma(tilt / alpha + r + 1.0) -
                  std::lgamma(tilt / alpha + 1.0) - std::lgamma(tilt + r * alpha + 1.0));
}

TiltedMittagLefflerSampler::TiltedMittagLefflerSampler(double alpha, double tilt,
                                                       double min_acceptance)
    : alpha_(alpha), tilt_(tilt) {
  require_alpha(alpha);
  if (!(tilt >= 0.0)) throw DomainError("sampler needs a nonnegative tilt");
  const Zolotarev z{alpha};
  power_ = tilt * (1.0 - alpha) / alpha;
  log_a0_ = z.log_a0();
  if (power_ == 0.0) {
    acceptance_ = 1.0;
    return;
  }
  // acceptance = 1/pi int_0^pi (A(0)/A(u))^p du; the integrand falls below
  // e^{-60} beyond `cut`
  auto lf = [&](double u) { return -power_ * z.log_ratio(u); };
  auto f = [&](double u) { return std::exp(lf(u)); };
  double cut = kPi;
  if (lf(kPi * (1.0 - 1e-12)) < -60.0) cut = bisect(lf, 1e-300, kPi * (1.0 - 1e-12), -60.0, false);
  PiecewiseIntegral integral;
  integral.add(f, 0.0, cut);
  acceptance_ = integral.value() / kPi;
  if (acceptance_ < min_acceptance)
    throw SamplingError("tilted Mittag-Leffler rejection sampler starves: acceptance rate " +
                        std::to_string(acceptance_) + " below floor " +
                        std::to_string(min_acceptance) + " at tilt " + std::to_string(tilt) +
                        "; use the alternative decomposition Y1*X");
}

double TiltedMittagLefflerSampler::operator()(Rng& rng) const {
  const Zolotarev z{alpha_};
  const long budget = static_cast<long>(1000.0 / acceptance_) + 1000000;
  for (long tries = 0; tries < budget; ++tries) {
    const double u = kPi * uniform_open(rng);
    const double d = z.log_ratio(u);
    if (power_ == 0.0 || std::log(uniform_open(rng)) <= -power_ * d) {
      const double la = log_a0_ + d;
      const double le = log_gamma_draw(rng, 1.0 + power_);
      return std::exp((1.0 - alpha_) * (le - la));
    }
  }
  throw SamplingError("tilted Mittag-Leffler rejection sampler exhausted its attempt budget");
}

}  // namespace pdrich
