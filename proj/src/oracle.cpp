#include "pdrich/oracle.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "pdrich/errors.hpp"

namespace pdrich::oracle {

namespace {

void require_size(long n) {
  if (n < 0 || n > kMaxSize)
    throw DomainError("oracle sizes are capped at " + std::to_string(kMaxSize) + ", got " +
                      std::to_string(n));
}

// Probability of seating the next customer at `block` (== sizes.size() for a
// new block).
Rational seat_probability(const RationalParams& p, const std::vector<long>& sizes, long n,
                          std::size_t block) {
  const Rational den = p.theta() + n;
  if (block == sizes.size()) return (p.theta() + Rational(static_cast<long>(sizes.size())) * p.alpha()) / den;
  return (Rational(sizes[block]) - p.alpha()) / den;
}

}  // namespace

RationalParams::RationalParams(const Rational& alpha, const Rational& theta, long max_denominator)
    : alpha_(alpha), theta_(theta) {
  alpha_.canonicalize();
  theta_.canonicalize();
  if (!(alpha_ > 0 && alpha_ < 1)) throw DomainError("rational alpha must lie in (0,1)");
  if (!(theta_ + alpha_ > 0)) throw DomainError("rational theta must exceed -alpha");
  if (alpha_.get_den() > max_denominator || theta_.get_den() > max_denominator)
    throw DomainError("rational parameter denominators exceed the configured bound");
}

long enumerate_partitions(int n, const std::function<void(std::span<const int>)>& visit) {
  if (n < 1) throw DomainError("enumerate_partitions needs n >= 1");
  require_size(n);
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  // prefix_max[i] = max(rgs[0..i])
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  long count = 0;
  while (true) {
    visit(rgs);
    ++count;
    int i = n - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return count;
}

Rational rising(const Rational& x, long b) {
  Rational acc(1);
  for (long i = 0; i < b; ++i) acc *= x + i;
  return acc;
}

Rational exact_eppf(const RationalParams& params, std::span<const long> counts) {
  long n = 0;
  for (long c : counts) n += c;
  const long k = static_cast<long>(counts.size());
  Rational v(1);
  for (long i = 1; i < k; ++i) v *= params.theta() + Rational(i) * params.alpha();
  v /= rising(params.theta() + 1, n - 1);
  const Rational one_minus = Rational(1) - params.alpha();
  for (long c : counts) v *= rising(one_minus, c - 1);
  return v;
}

Rational exact_path_probability(const RationalParams& params, std::span<const int> rgs) {
  std::vector<long> sizes;
  Rational acc(1);
  long n = 0;
  for (int b : rgs) {
    if (n == 0) {
      sizes.push_back(1);
      n = 1;
      continue;
    }
    acc *= seat_probability(params, sizes, n, static_cast<std::size_t>(b));
    if (static_cast<std::size_t>(b) == sizes.size())
      sizes.push_back(1);
    else
      ++sizes[b];
    ++n;
  }
  return acc;
}

std::vector<Rational> exact_kn_pmf(const RationalParams& params, int n) {
  require_size(n);
  std::vector<Rational> pmf(static_cast<std::size_t>(n) + 1, Rational(0));
  // EPPF values depend only on the sorted block-size profile
  std::map<std::vector<long>, Rational> memo;
  std::vector<long> sizes;
  enumerate_partitions(n, [&](std::span<const int> rgs) {
    sizes.assign(static_cast<std::size_t>(*std::max_element(rgs.begin(), rgs.end())) + 1, 0);
    for (int b : rgs) ++sizes[b];
    std::sort(sizes.begin(), sizes.end());
    auto it = memo.find(sizes);
    if (it == memo.end()) it = memo.emplace(sizes, exact_eppf(params, sizes)).first;
    pmf[sizes.size()] += it->second;
  });
  return pmf;
}

ExactContinuation exact_km_pmf(const RationalParams& params, std::span<const long> counts, int m) {
  long n = 0;
  for (long c : counts) {
    if (c < 1) throw DomainError("pilot counts must be positive");
    n += c;
  }
  if (counts.empty()) throw DomainError("pilot needs at least one block");
  if (m < 0) throw DomainError("m must be >= 0");
  require_size(n + m);

  const std::size_t k_old = counts.size();
  // State: old block sizes (labelled) followed by new block sizes (sorted,
  // since new blocks are exchangeable for K_m and S_m).
  using State = std::vector<long>;
  std::map<State, Rational> layer;
  layer.emplace(State(counts.begin(), counts.end()), Rational(1));
  for (int step = 0; step < m; ++step) {
    std::map<State, Rational> next;
    const long cur_n = n + step;
    for (const auto& [state, prob] : layer) {
      for (std::size_t b = 0; b <= state.size(); ++b) {
        const Rational p = prob * seat_probability(params, state, cur_n, b);
        State s = state;
        if (b == state.size())
          s.push_back(1);
        else
          ++s[b];
        std::sort(s.begin() + static_cast<long>(k_old), s.end());
        next[std::move(s)] += p;
      }
    }
    layer = std::move(next);
  }

  ExactContinuation out;
  out.km.assign(static_cast<std::size_t>(m) + 1, Rational(0));
  out.sm.assign(static_cast<std::size_t>(m) + 1, Rational(0));
  out.joint.resize(static_cast<std::size_t>(m) + 1);
  for (int s = 0; s <= m; ++s) out.joint[s].assign(static_cast<std::size_t>(s) + 1, Rational(0));
  for (const auto& [state, prob] : layer) {
    const long k_new = static_cast<long>(state.size() - k_old);
    long s_new = 0;
    for (std::size_t j = k_old; j < state.size(); ++j) s_new += state[j];
    out.km[k_new] += prob;
    out.sm[s_new] += prob;
    out.joint[s_new][k_new] += prob;
  }
  return out;
}

}  // namespace pdrich::oracle
