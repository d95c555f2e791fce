#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "omegalab/dist.hpp"
#include "omegalab/primes.hpp"
#include "omegalab/rng.hpp"

namespace omegalab {
class RngStream;

// Index law for the forced-prime draws. kLemmaWeights takes
// w_k ∝ v_n/(p_k + v_n - 1), the mean of the tilted Bernoulli, which is what
// the size-bias coupling demands and the only convention under which the
// single-bias oracle identity is exact. kPaperLiteral takes
// w_k ∝ 1/(p_k + v_n + 1) as displayed in the source theorem; its deviation
// is reported, never asserted.
enum class IndexConvention { kLemmaWeights, kPaperLiteral };

struct IndexLaw {
  std::vector<double> weights;  // over prime indices 0..pi(n)-1, sums to 1
  IndexConvention convention = IndexConvention::kLemmaWeights;
  std::vector<double> cdf;      // prefix sums for inverse-CDF sampling

  std::size_t sample(RngStream& rng) const;
};

IndexLaw index_law(const ModelParams& params, const PrimeTable& table,
                   IndexConvention conv = IndexConvention::kLemmaWeights);

// Number of blocks of the random partition induced by index coincidences.
int paintbox_delta(std::span<const std::uint32_t> indices);

// Independent model: sum of Bernoulli(1/p), p <= n.
DiscreteDist dist_omega_indep(const ModelParams& params, const PrimeTable& table);

// Exponentially tilted model: sum of Bernoulli(v_n/(p + v_n - 1)).
DiscreteDist dist_omega_tilted(const ModelParams& params, const PrimeTable& table);

// Penalisation of the independent model by the full corrective limit
// phi_c_closed(k/gamma_n).
DiscreteDist dist_omega_prime(const ModelParams& params, const PrimeTable& table);

// Penalisation by the k_n-truncated corrective factor phi_c_trunc(k_n, k/gamma_n).
// This is the exact ground-truth law for all sampler comparisons.
DiscreteDist dist_omega_dprime(const ModelParams& params, const PrimeTable& table);
DiscreteDist dist_omega_dprime_k(const ModelParams& params, const PrimeTable& table,
                                 int k_override);

// C'_n = sum_{l=1..k_n} B'_l(1/gamma_n): Bernoulli successes 1/(1 + gamma_n (l-1)).
DiscreteDist dist_cprime(const ModelParams& params);

// One pathwise draw: C' ~ dist_cprime, indices i.i.d. from the law, tilted
// Bernoullis on the non-indexed primes, plus the paintbox block count.
// Consumes exactly k_n + C' + pi(n) variates so that conditioned/pathwise
// runs couple draw-for-draw on a shared stream.
int sample_omega_dprime(const ModelParams& params, const PrimeTable& table,
                        const IndexLaw& law, RngStream& rng);

// Same draws, conditioning semantics: every Bernoulli is drawn, the indexed
// ones are forced to one. Equal in law (and pathwise, on coupled streams).
int sample_conditioned(const ModelParams& params, const PrimeTable& table,
                       const IndexLaw& law, RngStream& rng);

// Tiny instance for exhaustive oracles: pi(n) <= 8 primes, k_n <= 4.
// inv_gamma = 0 encodes gamma = +inf (v_n = 1), where C' == 1 a.s.
struct TinyInstance {
  std::vector<std::uint32_t> primes;
  int k_n = 1;
  double v_n = 1.0;
  double inv_gamma = 0.0;

  // gamma from the proof-version coupling v = exp(-H_k/gamma).
  static TinyInstance from_k_v(std::vector<std::uint32_t> primes, int k, double v);

  std::vector<double> tilted_probs() const;
  std::vector<double> cprime_probs() const;
  std::vector<double> index_weights(IndexConvention conv) const;
};

// Exact law of the pathwise construction by full enumeration: B'
// configurations x index tuples (product weights) x Bernoulli bitmasks of the
// non-indexed coordinates.
DiscreteDist brute_force_omega_dprime(const TinyInstance& tiny, IndexConvention conv);
DiscreteDist brute_force_omega_dprime(const TinyInstance& tiny,
                                      std::span<const double> index_weights);

// Exact law of the conditioning construction: same outer enumeration, but all
// coordinates are enumerated and the indexed ones forced to one.
DiscreteDist enumerate_conditioned(const TinyInstance& tiny, IndexConvention conv);

// The penalised law reconstructed from the algebraic identity
//   E[x^{Omega''}] ∝ E[(x v)^{Omega} Omega^{C'}],
// i.e. pmf[j] ∝ v^j E[j^{C'}] P(Omega = j).
DiscreteDist dist_dprime_identity(const TinyInstance& tiny);

DiscreteDist dist_cprime_tiny(const TinyInstance& tiny);

// Hybrid comparison model: A prime-indexed Bernoullis (success 1/p_k) plus
// A' harmonic Bernoullis (success 1/k), independent.
DiscreteDist dist_hybrid(std::size_t A, std::size_t A_prime, const PrimeTable& table);

// Penalised Poisson: penalise(poisson_truncated(gamma, eps), k -> phi(k/gamma)).
DiscreteDist dist_q(const std::function<double(double)>& phi, double gamma, double eps);

// pgf_value / exp(gamma (x-1)).
double mod_poisson_ratio(double pgf_value, double gamma, double x);

}  // namespace omegalab
