#ifndef PDRICH_PMF_HPP
#define PDRICH_PMF_HPP

#include <vector>

#include "pdrich/log_value.hpp"

namespace pdrich {

/// Probability mass function on the contiguous support
/// {support_min, ..., support_min + size - 1}, stored in log space.
class Pmf {
 public:
  Pmf() = default;
  Pmf(long support_min, std::vector<LogValue> log_probs)
      : support_min_(support_min), log_probs_(std::move(log_probs)) {}

  static Pmf point_mass(long x) { return Pmf(x, {LogValue::one()}); }

  long support_min() const { return support_min_; }
  long support_max() const { return support_min_ + static_cast<long>(log_probs_.size()) - 1; }
  std::size_t size() const { return log_probs_.size(); }
  const std::vector<LogValue>& log_probs() const { return log_probs_; }

  // zero outside the support
  LogValue log_prob(long x) const;
  double prob(long x) const { return log_prob(x).value(); }
  std::vector<double> probs() const;

  double total() const;
  double mean() const;
  // E[X^r], r >= 0
  double moment(int r) const;
  // argmax, smallest on ties
  long mode() const;

 private:
  long support_min_ = 0;
  std::vector<LogValue> log_probs_;
};

}  // namespace pdrich

#endif
