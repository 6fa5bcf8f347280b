#ifndef PDRICH_ASYMPTOTICS_HPP
#define PDRICH_ASYMPTOTICS_HPP

// Large-m behaviour of K_m given K_n = k: stable and Mittag-Leffler
// densities, the limit law Z of K_m / m^alpha, its moments, density and
// sampler.

#include <cstdint>
#include <vector>

#include "pdrich/pd_prior.hpp"
#include "pdrich/random.hpp"

namespace pdrich {

/// Density of the positive alpha-stable law with Laplace transform
/// exp(-lambda^alpha). Uses the Levy closed form at alpha = 1/2, a
/// convergent power series in x^{-alpha} far in the right tail, and
/// Zolotarev's integral otherwise. x > 0.
double stable_density(double alpha, double x);

/// Same density, always through Zolotarev's integral (adaptive quadrature).
double stable_density_zolotarev(double alpha, double x);

/// Natural log of stable_density; finite far into the left tail where the
/// density itself underflows.
double log_stable_density(double alpha, double x);

/// Mittag-Leffler density g(z) = z^{-1-1/alpha} f(z^{-1/alpha}) / alpha.
double ml_density(double alpha, double z);
double log_ml_density(double alpha, double z);

/// Polynomially tilted Mittag-Leffler density
/// Gamma(t+1)/Gamma(t/alpha+1) z^{t/alpha} g(z), t > -alpha.
double tilted_ml_density(double alpha, double tilt, double z);

/// E[Y^r] of the tilted Mittag-Leffler law above.
double tilted_ml_moment(double alpha, double tilt, double r);

/// Parameters of the limit Z of K_m / m^alpha given K_n = k.
class LimitLaw {
 public:
  LimitLaw(double alpha, double theta, long n, long k);
  LimitLaw(const PDParams& params, long n, long k);

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  long n() const { return n_; }
  long k() const { return k_; }

  // theta + k alpha: tilt of the Mittag-Leffler factor and first Beta shape
  double new_mass() const { return theta_ + static_cast<double>(k_) * alpha_; }
  // n - k alpha: second Beta shape
  double old_mass() const { return static_cast<double>(n_) - static_cast<double>(k_) * alpha_; }

 private:
  double alpha_;
  double theta_;
  long n_;
  long k_;
};

/// E[Z^r] = ((theta + k alpha)/alpha)_r Gamma(theta+n) / Gamma(theta+n+r alpha).
double limit_moment(const LimitLaw& law, int r);

/// E[Y1^r] E[X^r] for Y1 tilted-ML(alpha, theta+n) and
/// X ~ Beta(theta/alpha + k, n/alpha - k); equals limit_moment.
double alt_decomposition_moment(const LimitLaw& law, int r);

/// limit_moment(r) m^{r alpha}: the large-m approximation of E[K_m^r | K_n=k].
double km_moment_asymptotic(const LimitLaw& law, int r, long m);

/// Rescaled Beta(theta+k alpha, n-k alpha) density on (0,m), the local
/// limit of S_m given K_n = k.
double sm_local_density(const LimitLaw& law, long m, double s);

/// Probability of the unit cell [s-1/2, s+1/2] (clipped to [0,m]) under
/// sm_local_density, for s = 0..m.
std::vector<double> sm_local_cell_probs(const LimitLaw& law, long m);

/// Density of Z through the single integral over v in [z, inf).
double limit_density(const LimitLaw& law, double z);

/// Density of Z = Y W^alpha through the Beta-mixture integral over w in (0,1).
double limit_density_beta_mixture(const LimitLaw& law, double z);

/// Exact sampler for the tilted Mittag-Leffler law with tilt > 0.
///
/// A tilted-stable variable T (density proportional to t^{-tilt} f(t)) is
/// written through Kanter's representation T = (A(U)/E)^{(1-alpha)/alpha}.
/// Tilting then factorizes: E | U ~ Gamma(1 + p) with p = tilt (1-alpha)/alpha,
/// and U has density proportional to A(U)^{-p} on (0, pi). Since A is
/// increasing, U is drawn by rejection from the uniform law with acceptance
/// (A(0)/A(U))^p. Y = T^{-alpha}.
class TiltedMittagLefflerSampler {
 public:
  // Throws SamplingError when the acceptance rate is below min_acceptance.
  TiltedMittagLefflerSampler(double alpha, double tilt, double min_acceptance = 1e-4);

  double alpha() const { return alpha_; }
  double tilt() const { return tilt_; }
  double acceptance_rate() const { return acceptance_; }

  double operator()(Rng& rng) const;

 private:
  double alpha_;
  double tilt_;
  double power_;
  double log_a0_;
  double acceptance_;
};

enum class Decomposition {
  Product,      // Y W^alpha, Y ~ tilted-ML(alpha, theta+k alpha), W ~ Beta(theta+k alpha, n-k alpha)
  Alternative,  // Y1 X, Y1 ~ tilted-ML(alpha, theta+n), X ~ Beta(theta/alpha+k, n/alpha-k)
};

struct SamplerOptions {
  Decomposition decomposition = Decomposition::Product;
  unsigned threads = 1;
  double min_acceptance = 1e-4;
};

/// count i.i.d. draws of Z. Output depends only on (seed, count, decomposition).
std::vector<double> sample_limit(const LimitLaw& law, long count, std::uint64_t seed,
                                 const SamplerOptions& opts = {});

}  // namespace pdrich

#endif
