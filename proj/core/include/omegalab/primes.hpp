#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace omegalab {

// Memory budget for the flat sieves (bit array / byte array).
inline constexpr std::uint64_t kSieveLimitMax = 100'000'000;

// Primes up to `limit` with running compensated sums of 1/p in ascending
// order. The final prefix entry is the prime harmonic sum gamma_n, the model
// speed used everywhere downstream.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> primes;
  std::vector<double> recip_prefix;

  std::size_t pi() const { return primes.size(); }
  double gamma() const { return recip_prefix.empty() ? 0.0 : recip_prefix.back(); }
};

PrimeTable sieve(std::uint64_t n);

// H_k = sum_{j<=k} 1/j, compensated, ascending j.
double harmonic(std::uint64_t k);

// v_n convention: the proof of the model theorem needs exp(-H_{k_n}/gamma_n)
// for the tilt/size-bias algebra to close exactly; the notation section's
// exp(-H_{k_n}/k_n) is kept as a sensitivity switch.
enum class VnConvention { kProof, kNotation };

struct ModelParams {
  std::uint64_t n = 0;
  double gamma_n = 0.0;
  int k_n = 0;
  double v_n = 0.0;
  std::uint64_t pi_n = 0;
  VnConvention vn_convention = VnConvention::kProof;
};

ModelParams params(const PrimeTable& table,
                   VnConvention conv = VnConvention::kProof);

}  // namespace omegalab
