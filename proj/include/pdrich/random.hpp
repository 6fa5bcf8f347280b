#ifndef PDRICH_RANDOM_HPP
#define PDRICH_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace pdrich {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream); streams are used per run or per
/// chunk so that results do not depend on how work is split across threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

/// Uniform on the open interval (0,1).
inline double uniform_open(Rng& rng) {
  double u;
  do {
    u = std::generate_canonical<double, 53>(rng);
  } while (u <= 0.0);
  return u;
}

inline double gamma_draw(Rng& rng, double shape) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(rng);
}

/// log of a Gamma(shape, 1) draw; small shapes go through
/// G(a) = G(a+1) U^{1/a} so that the draw never underflows to zero.
inline double log_gamma_draw(Rng& rng, double shape) {
  if (shape >= 1.0) return std::log(gamma_draw(rng, shape));
  const double g = gamma_draw(rng, shape + 1.0);
  return std::log(g) + std::log(uniform_open(rng)) / shape;
}

inline double beta_draw(Rng& rng, double a, double b) {
  const double lx = log_gamma_draw(rng, a);
  const double ly = log_gamma_draw(rng, b);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

}  // namespace pdrich

#endif
