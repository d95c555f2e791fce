#include "omegalab/primes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "omegalab/numeric.hpp"

namespace omegalab {

PrimeTable sieve(std::uint64_t n) {
  if (n < 2) {
    throw std::domain_error("sieve: n = " + std::to_string(n) +
                            " is below the smallest prime, table would be empty");
  }
  if (n > kSieveLimitMax) {
    throw std::length_error("sieve: n = " + std::to_string(n) +
                            " exceeds the memory budget of 1e8");
  }

  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i * i <= n; ++i) {
    if (!composite[i]) {
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
  }

  PrimeTable table;
  table.limit = n;
  KahanSum acc;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      table.primes.push_back(static_cast<std::uint32_t>(i));
      acc.add(1.0 / static_cast<double>(i));
      table.recip_prefix.push_back(acc.value());
    }
  }
  return table;
}

double harmonic(std::uint64_t k) {
  if (k == 0) throw std::domain_error("harmonic: k must be >= 1");
  KahanSum acc;
  for (std::uint64_t j = 1; j <= k; ++j) acc.add(1.0 / static_cast<double>(j));
  return acc.value();
}

ModelParams params(const PrimeTable& table, VnConvention conv) {
  ModelParams p;
  p.n = table.limit;
  p.gamma_n = table.gamma();
  p.k_n = static_cast<int>(std::floor(p.gamma_n));
  p.pi_n = table.pi();
  p.vn_convention = conv;
  if (p.k_n < 1) {
    throw std::domain_error("params: k_n = floor(gamma_n) = 0 at n = " +
                            std::to_string(p.n) + ", model undefined");
  }
  const double h = harmonic(static_cast<std::uint64_t>(p.k_n));
  const double denom =
      conv == VnConvention::kProof ? p.gamma_n : static_cast<double>(p.k_n);
  p.v_n = std::exp(-h / denom);
  return p;
}

}  // namespace omegalab
