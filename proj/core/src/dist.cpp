#include "omegalab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "omegalab/numeric.hpp"

namespace omegalab {

namespace {

constexpr double kMassTolerance = 1e-12;
// Cross-check bound between a transform's accumulated normaliser and the
// analytic value where one exists.
constexpr double kNormCrossCheck = 1e-9;

double checked_sum(const std::vector<double>& pmf) {
  KahanSum acc;
  for (double v : pmf) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("DiscreteDist: negative or NaN mass entry");
    }
    acc.add(v);
  }
  return acc.value();
}

std::vector<double> normalised(std::vector<double> w) {
  const double total = checked_sum(w);
  if (!(total > 0.0)) {
    throw std::domain_error("DiscreteDist: degenerate distribution (zero normaliser)");
  }
  for (double& v : w) v /= total;
  return w;
}

// log Poisson(gamma) tail P(P > K), summed backward from a generous upper cut.
double log_poisson_tail(double gamma, std::int64_t K) {
  const double sd = std::sqrt(gamma);
  const std::int64_t hi =
      static_cast<std::int64_t>(gamma + 40.0 * sd + 60.0) + K;
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(hi - K));
  for (std::int64_t k = K + 1; k <= hi; ++k) {
    const double kk = static_cast<double>(k);
    logs.push_back(kk * std::log(gamma) - gamma - std::lgamma(kk + 1.0));
  }
  return log_sum_exp(logs);
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw std::invalid_argument("DiscreteDist: empty pmf");
  const double total = checked_sum(pmf_);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("DiscreteDist: total mass " +
                                std::to_string(total) + " is not 1 within 1e-12");
  }
}

DiscreteDist DiscreteDist::point_mass(std::size_t k) {
  std::vector<double> pmf(k + 1, 0.0);
  pmf[k] = 1.0;
  return DiscreteDist(std::move(pmf), unchecked_tag{});
}

DiscreteDist DiscreteDist::from_weights(std::vector<double> weights) {
  return DiscreteDist(normalised(std::move(weights)), unchecked_tag{});
}

double DiscreteDist::mean() const {
  KahanSum acc;
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    acc.add(static_cast<double>(k) * pmf_[k]);
  }
  return acc.value();
}

DiscreteDist bernoulli_sum(std::span<const double> probs) {
  return bernoulli_sum_capped(probs, probs.size() + 1);
}

DiscreteDist bernoulli_sum_capped(std::span<const double> probs, std::size_t cap) {
  cap = std::min(cap, probs.size() + 1);
  if (cap == 0) cap = 1;
  std::vector<double> pmf(cap, 0.0);
  pmf[0] = 1.0;
  std::size_t used = 1;  // current live support length
  for (double p : probs) {
    if (!(p >= 0.0) || p > 1.0) {
      throw std::domain_error("bernoulli_sum: probability outside [0,1]");
    }
    const double q = 1.0 - p;
    const std::size_t top = std::min(used + 1, cap);
    for (std::size_t j = top - 1; j >= 1; --j) {
      pmf[j] = pmf[j] * q + pmf[j - 1] * p;
    }
    pmf[0] *= q;
    used = top;
  }
  return DiscreteDist(std::move(pmf), DiscreteDist::unchecked_tag{});
}

std::size_t bernoulli_support_cap(double mean_sum) {
  // Chernoff with Poisson domination: P(S >= a) <= e^{-g} (e g / a)^a.
  const double g = std::max(mean_sum, 1e-9);
  double a = std::ceil(g) + 1.0;
  while (-g + a * (1.0 + std::log(g) - std::log(a)) > std::log(1e-30)) a += 1.0;
  return static_cast<std::size_t>(a) + 8;
}

DiscreteDist poisson_truncated(double gamma, double eps) {
  if (!(gamma > 0.0)) throw std::domain_error("poisson_truncated: gamma must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("poisson_truncated: eps must lie in (0,1)");
  }
  constexpr double kLaplaceWindow = 4.0;  // largest tilt/PGF argument in use
  const double g4 = kLaplaceWindow * gamma;
  std::int64_t K = static_cast<std::int64_t>(g4);
  const double budget = std::log(eps) - (kLaplaceWindow - 1.0) * gamma;
  while (log_poisson_tail(g4, K) >= budget) ++K;

  std::vector<double> logs(static_cast<std::size_t>(K) + 1);
  for (std::int64_t k = 0; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    logs[static_cast<std::size_t>(k)] =
        kk * std::log(gamma) - gamma - std::lgamma(kk + 1.0);
  }
  std::vector<double> pmf(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) pmf[k] = std::exp(logs[k]);
  return DiscreteDist::from_weights(std::move(pmf));
}

DiscreteDist tilt(const DiscreteDist& d, double x) {
  if (!(x > 0.0)) throw std::domain_error("tilt: x must be > 0");
  const auto probs = d.probs();
  const std::size_t K = d.support_max();
  if (x > 1.0 && static_cast<double>(K) * std::log(x) > 600.0) {
    // log-space path for very wide supports
    std::vector<double> logs(probs.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] > 0.0) {
        logs[k] = std::log(probs[k]) + static_cast<double>(k) * std::log(x);
      }
    }
    const double lz = log_sum_exp(logs);
    std::vector<double> w(probs.size(), 0.0);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (std::isfinite(logs[k])) w[k] = std::exp(logs[k] - lz);
    }
    return DiscreteDist::from_weights(std::move(w));
  }

  std::vector<double> w(probs.size());
  KahanSum norm;
  double xk = 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    w[k] = probs[k] * xk;
    norm.add(w[k]);
    xk *= x;
  }
  // analytic normaliser is the PGF; cross-check against Horner
  const double horner = pgf(d, x);
  if (horner > 0.0 &&
      std::abs(norm.value() - horner) > kNormCrossCheck * horner) {
    throw std::logic_error("tilt: normaliser drifted from the PGF value");
  }
  return DiscreteDist::from_weights(std::move(w));
}

DiscreteDist size_bias(const DiscreteDist& d) {
  const double mu = d.mean();
  if (!(mu > 0.0)) {
    throw std::domain_error("size_bias: mean is zero (degenerate at 0)");
  }
  const auto probs = d.probs();
  std::vector<double> w(probs.size(), 0.0);
  for (std::size_t k = 1; k < probs.size(); ++k) {
    w[k] = static_cast<double>(k) * probs[k];
  }
  return DiscreteDist::from_weights(std::move(w));
}

DiscreteDist size_bias_iter(const DiscreteDist& d, int ell) {
  if (ell < 0) throw std::domain_error("size_bias_iter: ell must be >= 0");
  if (ell == 0) return d;
  const auto probs = d.probs();
  // k^ell in log space; supports can reach 1e4 and ell the teens.
  std::vector<double> logs(probs.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > 0.0) {
      logs[k] = std::log(probs[k]) +
                static_cast<double>(ell) * std::log(static_cast<double>(k));
    }
  }
  const double lz = log_sum_exp(logs);
  if (!std::isfinite(lz)) {
    throw std::domain_error("size_bias_iter: all mass at 0 with ell >= 1");
  }
  std::vector<double> w(probs.size(), 0.0);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (std::isfinite(logs[k])) w[k] = std::exp(logs[k] - lz);
  }
  return DiscreteDist::from_weights(std::move(w));
}

DiscreteDist penalise(const DiscreteDist& d,
                      const std::function<double(std::size_t)>& w) {
  const auto probs = d.probs();
  std::vector<double> out(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double wk = w(k);
    if (!(wk >= 0.0)) {
      throw std::domain_error("penalise: weight function negative at k = " +
                              std::to_string(k));
    }
    out[k] = probs[k] * wk;
  }
  return DiscreteDist::from_weights(std::move(out));
}

double pgf(const DiscreteDist& d, double x) {
  if (!(x >= 0.0)) throw std::domain_error("pgf: x must be >= 0");
  const auto probs = d.probs();
  const std::size_t K = d.support_max();
  if (x > 1.0 && static_cast<double>(K) * std::log(x) > 600.0) {
    std::vector<double> logs;
    logs.reserve(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] > 0.0) {
        logs.push_back(std::log(probs[k]) + static_cast<double>(k) * std::log(x));
      }
    }
    return std::exp(log_sum_exp(logs));
  }
  double acc = 0.0;
  for (std::size_t i = probs.size(); i-- > 0;) {
    acc = acc * x + probs[i];
  }
  return acc;
}

double total_variation(const DiscreteDist& a, const DiscreteDist& b) {
  const std::size_t n = std::max(a.probs().size(), b.probs().size());
  KahanSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    acc.add(std::abs(a.pmf(k) - b.pmf(k)));
  }
  return 0.5 * acc.value();
}

}  // namespace omegalab
