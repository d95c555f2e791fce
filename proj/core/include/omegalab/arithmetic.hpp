#pragma once

#include <cstdint>
#include <vector>

#include "omegalab/dist.hpp"
#include "omegalab/primes.hpp"
#include "omegalab/report.hpp"

namespace omegalab {

// omega[m] = number of distinct prime divisors of m, 1 <= m <= limit.
// 8-bit entries suffice: 2*3*5*7*11*13*17*19*23 > 1e8.
struct OmegaTable {
  std::uint64_t limit = 0;
  std::vector<std::uint8_t> omega;  // index 0 unused
};

OmegaTable omega_sieve(std::uint64_t n);

// Law of omega(U_n) for U_n uniform on {1..n}.
DiscreteDist dist_omega_uniform(const OmegaTable& table);
DiscreteDist dist_omega_uniform(std::uint64_t n);

// Raw mod-Poisson ratio of omega(U_n) at speed gamma_n = sum_{p<=n} 1/p.
// The free exponential factor e^{c(x-1)} is fitted at report level, not here.
double sathe_selberg_ratio(std::uint64_t n, double x);
double sathe_selberg_ratio(const OmegaTable& omega, const PrimeTable& table, double x);

// Tabulates P(omega(U_n)=k) against the local-limit references
// P(Poisson=k) phi_omega(k/gamma) and the penalised-Poisson law, for k up to
// 2 gamma. Report-only; rows flattened into the RatioTable schema with the
// x column carrying k.
RatioTable local_limit_report(std::uint64_t n);

// Kolmogorov-Smirnov distance between the law of (X - gamma)/sqrt(gamma) and
// the standard normal, taking both one-sided deviations at each jump.
double erdos_kac_stat(const DiscreteDist& d, double gamma);

}  // namespace omegalab
