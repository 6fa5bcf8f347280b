#include "pdrich/pmf.hpp"

#include <cmath>

namespace pdrich {

LogValue Pmf::log_prob(long x) const {
  if (x < support_min_ || x > support_max()) return LogValue::zero();
  return log_probs_[static_cast<std::size_t>(x - support_min_)];
}

std::vector<double> Pmf::probs() const {
  std::vector<double> out;
  out.reserve(log_probs_.size());
  for (auto lp : log_probs_) out.push_back(lp.value());
  return out;
}

double Pmf::total() const {
  long double acc = 0.0L;
  for (auto lp : log_probs_) acc += lp.value();
  return static_cast<double>(acc);
}

double Pmf::mean() const { return moment(1); }

double Pmf::moment(int r) const {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < log_probs_.size(); ++i) {
    const long double x = static_cast<long double>(support_min_ + static_cast<long>(i));
    acc += std::pow(x, r) * static_cast<long double>(log_probs_[i].value());
  }
  return static_cast<double>(acc);
}

long Pmf::mode() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < log_probs_.size(); ++i)
    if (log_probs_[best] < log_probs_[i]) best = i;
  return support_min_ + static_cast<long>(best);
}

}  // namespace pdrich
