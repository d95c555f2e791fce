#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace omegalab {

// Finite probability mass function on {0, .., support_max()}.
// Invariants: entries nonnegative, total mass within 1e-12 of one.
class DiscreteDist {
 public:
  DiscreteDist() : pmf_{1.0} {}
  explicit DiscreteDist(std::vector<double> pmf);

  static DiscreteDist point_mass(std::size_t k);
  // Normalises a nonnegative weight vector; throws if the total is not
  // positive ("degenerate" in the transform error vocabulary).
  static DiscreteDist from_weights(std::vector<double> weights);

  std::size_t support_max() const { return pmf_.size() - 1; }
  double pmf(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
  std::span<const double> probs() const { return pmf_; }

  double mean() const;

 private:
  struct unchecked_tag {};
  DiscreteDist(std::vector<double> pmf, unchecked_tag) : pmf_(std::move(pmf)) {}

  std::vector<double> pmf_;
  friend DiscreteDist bernoulli_sum_capped(std::span<const double>, std::size_t);
};

// Exact convolution of independent Bernoulli(p_i); support_max = probs.size().
DiscreteDist bernoulli_sum(std::span<const double> probs);

// Convolution with the support capped at `cap` entries. The dropped tail mass
// is bounded by the Poisson-dominated Chernoff tail, so callers pick `cap`
// with bernoulli_support_cap() and the loss stays below ~1e-30.
DiscreteDist bernoulli_sum_capped(std::span<const double> probs, std::size_t cap);
std::size_t bernoulli_support_cap(double mean_sum);

// Poisson(gamma) truncated and renormalised. Support policy: smallest K with
//   e^{(X-1)gamma} * P(Poisson(X*gamma) > K) < eps   at X = 4,
// i.e. the truncation stays faithful under every tilt/PGF argument x <= 4
// used in this lab, not merely under the identity map. The plain tail mass
// beyond K is then far below eps as well. support_max() records K.
DiscreteDist poisson_truncated(double gamma, double eps);

// pmf[k] -> pmf[k] * x^k, renormalised.
DiscreteDist tilt(const DiscreteDist& d, double x);

// pmf[k] -> k * pmf[k] / mean.
DiscreteDist size_bias(const DiscreteDist& d);

// pmf[k] -> k^ell * pmf[k], renormalised; ell = 0 returns d.
DiscreteDist size_bias_iter(const DiscreteDist& d, int ell);

// pmf[k] -> w(k) * pmf[k], renormalised. w must be nonnegative.
DiscreteDist penalise(const DiscreteDist& d,
                      const std::function<double(std::size_t)>& w);

// Horner evaluation of sum pmf[k] x^k; switches to log space when
// support_max * log(x) could overflow.
double pgf(const DiscreteDist& d, double x);

// (1/2) sum |a[k] - b[k]| over the union support.
double total_variation(const DiscreteDist& a, const DiscreteDist& b);

}  // namespace omegalab
