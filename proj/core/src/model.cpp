#include "omegalab/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "omegalab/limiting.hpp"
#include "omegalab/numeric.hpp"
#include "omegalab/rng.hpp"

namespace omegalab {

namespace {

std::vector<double> reciprocal_probs(const PrimeTable& table) {
  std::vector<double> probs;
  probs.reserve(table.pi());
  for (std::uint32_t p : table.primes) probs.push_back(1.0 / static_cast<double>(p));
  return probs;
}

std::vector<double> tilted_probs(const PrimeTable& table, double v) {
  std::vector<double> probs;
  probs.reserve(table.pi());
  for (std::uint32_t p : table.primes) {
    probs.push_back(v / (static_cast<double>(p) + v - 1.0));
  }
  return probs;
}

std::vector<double> normalised_weights(std::vector<double> w) {
  KahanSum acc;
  for (double x : w) acc.add(x);
  const double total = acc.value();
  for (double& x : w) x /= total;
  return w;
}

void check_model_inputs(const ModelParams& params, const PrimeTable& table) {
  if (params.n != table.limit) {
    throw std::invalid_argument("model: params.n does not match table.limit");
  }
}

// Success probability of B'_l(1/gamma): 1/(1 + gamma (l-1)), expressed
// through 1/gamma so that gamma = +inf (v = 1) degrades gracefully.
double cprime_success(int l, double inv_gamma) {
  if (l == 1) return 1.0;
  return inv_gamma / (inv_gamma + static_cast<double>(l - 1));
}

}  // namespace

IndexLaw index_law(const ModelParams& params, const PrimeTable& table,
                   IndexConvention conv) {
  check_model_inputs(params, table);
  std::vector<double> w;
  w.reserve(table.pi());
  for (std::uint32_t p : table.primes) {
    const double pd = static_cast<double>(p);
    if (conv == IndexConvention::kLemmaWeights) {
      w.push_back(params.v_n / (pd + params.v_n - 1.0));
    } else {
      w.push_back(1.0 / (pd + params.v_n + 1.0));
    }
  }
  IndexLaw law;
  law.weights = normalised_weights(std::move(w));
  law.convention = conv;
  law.cdf.reserve(law.weights.size());
  KahanSum acc;
  for (double x : law.weights) {
    acc.add(x);
    law.cdf.push_back(acc.value());
  }
  law.cdf.back() = 1.0;
  return law;
}

std::size_t IndexLaw::sample(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

int paintbox_delta(std::span<const std::uint32_t> indices) {
  std::vector<std::uint32_t> v(indices.begin(), indices.end());
  std::sort(v.begin(), v.end());
  return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

DiscreteDist dist_omega_indep(const ModelParams& params, const PrimeTable& table) {
  check_model_inputs(params, table);
  const auto probs = reciprocal_probs(table);
  return bernoulli_sum_capped(probs, bernoulli_support_cap(params.gamma_n));
}

DiscreteDist dist_omega_tilted(const ModelParams& params, const PrimeTable& table) {
  check_model_inputs(params, table);
  const auto probs = tilted_probs(table, params.v_n);
  KahanSum mean;
  for (double p : probs) mean.add(p);
  return bernoulli_sum_capped(probs, bernoulli_support_cap(mean.value()));
}

DiscreteDist dist_omega_prime(const ModelParams& params, const PrimeTable& table) {
  const DiscreteDist base = dist_omega_indep(params, table);
  const double gamma = params.gamma_n;
  return penalise(base, [gamma](std::size_t k) {
    return phi_c_closed(static_cast<double>(k) / gamma);
  });
}

DiscreteDist dist_omega_dprime(const ModelParams& params, const PrimeTable& table) {
  return dist_omega_dprime_k(params, table, params.k_n);
}

DiscreteDist dist_omega_dprime_k(const ModelParams& params, const PrimeTable& table,
                                 int k_override) {
  if (k_override < 1) throw std::domain_error("dist_omega_dprime: k must be >= 1");
  const DiscreteDist base = dist_omega_indep(params, table);
  const double gamma = params.gamma_n;
  return penalise(base, [gamma, k_override](std::size_t k) {
    return phi_c_trunc(k_override, static_cast<double>(k) / gamma);
  });
}

DiscreteDist dist_cprime(const ModelParams& params) {
  if (params.k_n < 1) throw std::domain_error("dist_cprime: k_n must be >= 1");
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(params.k_n));
  for (int l = 1; l <= params.k_n; ++l) {
    probs.push_back(1.0 / (1.0 + params.gamma_n * static_cast<double>(l - 1)));
  }
  return bernoulli_sum(probs);
}

int sample_omega_dprime(const ModelParams& params, const PrimeTable& table,
                        const IndexLaw& law, RngStream& rng) {
  check_model_inputs(params, table);
  int cprime = 0;
  const double inv_gamma = 1.0 / params.gamma_n;
  for (int l = 1; l <= params.k_n; ++l) {
    if (rng.bernoulli(cprime_success(l, inv_gamma))) ++cprime;
  }
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(cprime));
  for (auto& i : idx) i = static_cast<std::uint32_t>(law.sample(rng));
  int total = paintbox_delta(idx);
  const double v = params.v_n;
  for (std::size_t k = 0; k < table.primes.size(); ++k) {
    const double p = v / (static_cast<double>(table.primes[k]) + v - 1.0);
    const bool hit = rng.uniform() < p;  // drawn even when excluded: keeps
                                         // streams coupled with the
                                         // conditioned sampler
    if (hit && std::find(idx.begin(), idx.end(), static_cast<std::uint32_t>(k)) ==
                   idx.end()) {
      ++total;
    }
  }
  return total;
}

int sample_conditioned(const ModelParams& params, const PrimeTable& table,
                       const IndexLaw& law, RngStream& rng) {
  check_model_inputs(params, table);
  int cprime = 0;
  const double inv_gamma = 1.0 / params.gamma_n;
  for (int l = 1; l <= params.k_n; ++l) {
    if (rng.bernoulli(cprime_success(l, inv_gamma))) ++cprime;
  }
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(cprime));
  for (auto& i : idx) i = static_cast<std::uint32_t>(law.sample(rng));
  const double v = params.v_n;
  int total = 0;
  for (std::size_t k = 0; k < table.primes.size(); ++k) {
    const double p = v / (static_cast<double>(table.primes[k]) + v - 1.0);
    bool hit = rng.uniform() < p;
    if (std::find(idx.begin(), idx.end(), static_cast<std::uint32_t>(k)) != idx.end()) {
      hit = true;  // conditioning forces the indexed variable to one
    }
    if (hit) ++total;
  }
  return total;
}

TinyInstance TinyInstance::from_k_v(std::vector<std::uint32_t> primes, int k, double v) {
  if (k < 1) throw std::domain_error("TinyInstance: k must be >= 1");
  if (!(v > 0.0) || v > 1.0) throw std::domain_error("TinyInstance: v must lie in (0,1]");
  TinyInstance t;
  t.primes = std::move(primes);
  t.k_n = k;
  t.v_n = v;
  t.inv_gamma = v == 1.0 ? 0.0 : -std::log(v) / harmonic(static_cast<std::uint64_t>(k));
  return t;
}

std::vector<double> TinyInstance::tilted_probs() const {
  std::vector<double> probs;
  probs.reserve(primes.size());
  for (std::uint32_t p : primes) {
    probs.push_back(v_n / (static_cast<double>(p) + v_n - 1.0));
  }
  return probs;
}

std::vector<double> TinyInstance::cprime_probs() const {
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(k_n));
  for (int l = 1; l <= k_n; ++l) probs.push_back(cprime_success(l, inv_gamma));
  return probs;
}

std::vector<double> TinyInstance::index_weights(IndexConvention conv) const {
  std::vector<double> w;
  w.reserve(primes.size());
  for (std::uint32_t p : primes) {
    const double pd = static_cast<double>(p);
    w.push_back(conv == IndexConvention::kLemmaWeights
                    ? v_n / (pd + v_n - 1.0)
                    : 1.0 / (pd + v_n + 1.0));
  }
  return normalised_weights(std::move(w));
}

namespace {

void check_tiny(const TinyInstance& tiny) {
  if (tiny.primes.size() > 8) {
    throw std::length_error("tiny instance: more than 8 primes");
  }
  if (tiny.k_n > 4) throw std::length_error("tiny instance: k_n > 4");
  if (tiny.primes.empty()) throw std::domain_error("tiny instance: no primes");
}

// Walks every B' configuration and every index tuple, handing (tuple weight,
// set-of-indices bitmask) to the sink.
template <typename Sink>
void for_each_forcing(const TinyInstance& tiny, std::span<const double> w,
                      Sink&& sink) {
  const auto qs = tiny.cprime_probs();
  const int m = static_cast<int>(tiny.primes.size());
  const int kn = tiny.k_n;
  for (unsigned bmask = 0; bmask < (1u << kn); ++bmask) {
    double pb = 1.0;
    int c = 0;
    for (int l = 0; l < kn; ++l) {
      if (bmask >> l & 1u) {
        pb *= qs[static_cast<std::size_t>(l)];
        ++c;
      } else {
        pb *= 1.0 - qs[static_cast<std::size_t>(l)];
      }
    }
    if (pb == 0.0) continue;
    // odometer over {0..m-1}^c
    std::vector<int> tup(static_cast<std::size_t>(c), 0);
    while (true) {
      double wt = pb;
      unsigned sbits = 0;
      for (int i : tup) {
        wt *= w[static_cast<std::size_t>(i)];
        sbits |= 1u << i;
      }
      sink(wt, sbits);
      int pos = c - 1;
      while (pos >= 0 && tup[static_cast<std::size_t>(pos)] == m - 1) {
        tup[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++tup[static_cast<std::size_t>(pos)];
    }
  }
}

}  // namespace

DiscreteDist brute_force_omega_dprime(const TinyInstance& tiny, IndexConvention conv) {
  const auto w = tiny.index_weights(conv);
  return brute_force_omega_dprime(tiny, w);
}

DiscreteDist brute_force_omega_dprime(const TinyInstance& tiny,
                                      std::span<const double> index_weights) {
  check_tiny(tiny);
  const auto pts = tiny.tilted_probs();
  const int m = static_cast<int>(tiny.primes.size());
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  for_each_forcing(tiny, index_weights, [&](double wt, unsigned sbits) {
    const int delta = std::popcount(sbits);
    const unsigned comp = ((1u << m) - 1u) & ~sbits;
    // submask enumeration of the non-indexed coordinates
    unsigned r = comp;
    while (true) {
      double pr = 1.0;
      for (int i = 0; i < m; ++i) {
        if (!(comp >> i & 1u)) continue;
        pr *= (r >> i & 1u) ? pts[static_cast<std::size_t>(i)]
                            : 1.0 - pts[static_cast<std::size_t>(i)];
      }
      out[static_cast<std::size_t>(delta + std::popcount(r))] += wt * pr;
      if (r == 0) break;
      r = (r - 1) & comp;
    }
  });
  return DiscreteDist::from_weights(std::move(out));
}

DiscreteDist enumerate_conditioned(const TinyInstance& tiny, IndexConvention conv) {
  check_tiny(tiny);
  const auto pts = tiny.tilted_probs();
  const auto w = tiny.index_weights(conv);
  const int m = static_cast<int>(tiny.primes.size());
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  for_each_forcing(tiny, w, [&](double wt, unsigned sbits) {
    // every coordinate drawn; indexed ones forced to one afterwards
    for (unsigned r = 0; r < (1u << m); ++r) {
      double pr = 1.0;
      int value = 0;
      for (int i = 0; i < m; ++i) {
        pr *= (r >> i & 1u) ? pts[static_cast<std::size_t>(i)]
                            : 1.0 - pts[static_cast<std::size_t>(i)];
        const bool forced = (sbits >> i & 1u) != 0;
        if (forced || (r >> i & 1u)) ++value;
      }
      out[static_cast<std::size_t>(value)] += wt * pr;
    }
  });
  return DiscreteDist::from_weights(std::move(out));
}

DiscreteDist dist_cprime_tiny(const TinyInstance& tiny) {
  return bernoulli_sum(tiny.cprime_probs());
}

DiscreteDist dist_dprime_identity(const TinyInstance& tiny) {
  check_tiny(tiny);
  std::vector<double> recip;
  recip.reserve(tiny.primes.size());
  for (std::uint32_t p : tiny.primes) recip.push_back(1.0 / static_cast<double>(p));
  const DiscreteDist omega = bernoulli_sum(recip);
  const DiscreteDist cprime = dist_cprime_tiny(tiny);
  const double v = tiny.v_n;
  std::vector<double> out(omega.probs().size(), 0.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    // E[j^{C'}] = pgf of C' at j  (0^0 = 1 handled by pgf's Horner form)
    out[j] = std::pow(v, static_cast<double>(j)) *
             pgf(cprime, static_cast<double>(j)) * omega.pmf(j);
  }
  return DiscreteDist::from_weights(std::move(out));
}

DiscreteDist dist_hybrid(std::size_t A, std::size_t A_prime, const PrimeTable& table) {
  if (A > table.pi()) {
    throw std::domain_error("dist_hybrid: A exceeds pi(table.limit)");
  }
  std::vector<double> probs;
  probs.reserve(A + A_prime);
  KahanSum mean;
  for (std::size_t k = 0; k < A; ++k) {
    probs.push_back(1.0 / static_cast<double>(table.primes[k]));
    mean.add(probs.back());
  }
  for (std::size_t k = 1; k <= A_prime; ++k) {
    probs.push_back(1.0 / static_cast<double>(k));
    mean.add(probs.back());
  }
  return bernoulli_sum_capped(probs, bernoulli_support_cap(mean.value()));
}

DiscreteDist dist_q(const std::function<double(double)>& phi, double gamma, double eps) {
  const DiscreteDist base = poisson_truncated(gamma, eps);
  return penalise(base, [&phi, gamma](std::size_t k) {
    return phi(static_cast<double>(k) / gamma);
  });
}

double mod_poisson_ratio(double pgf_value, double gamma, double x) {
  if (!(gamma > 0.0)) throw std::domain_error("mod_poisson_ratio: gamma must be > 0");
  return pgf_value * std::exp(-gamma * (x - 1.0));
}

}  // namespace omegalab
