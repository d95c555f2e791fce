#include "omegalab/limiting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omegalab/numeric.hpp"

namespace omegalab {

double phi_c_trunc(std::int64_t k, double x) {
  if (k < 1) throw std::domain_error("phi_c_trunc: k must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("phi_c_trunc: x must be >= 0");
  const double u = x - 1.0;
  // l = 1 factor is x e^{1-x}; the only factor that can vanish on x >= 0.
  const double first = x * std::exp(-u);
  if (first == 0.0 || k == 1) return first;
  if (k <= 1000) {
    // product of (1 + u/l) stays within ~k^|u|, safe in doubles here
    double prod = 1.0;
    KahanSum harm;
    for (std::int64_t l = 2; l <= k; ++l) {
      const double inv = 1.0 / static_cast<double>(l);
      prod *= 1.0 + u * inv;
      harm.add(inv);
    }
    return first * prod * std::exp(-u * harm.value());
  }
  KahanSum logs;
  for (std::int64_t l = 2; l <= k; ++l) {
    const double ul = u / static_cast<double>(l);
    logs.add(std::log1p(ul) - ul);
  }
  return first * std::exp(logs.value());
}

double phi_c_closed(double x) {
  if (x < 0.0) throw std::domain_error("phi_c_closed: x must be >= 0");
  if (x == 0.0) return 0.0;
  return std::exp(-(x - 1.0) * kEulerMascheroni - std::lgamma(x));
}

double phi_prime_trunc(const PrimeTable& table, double x) {
  if (!(x >= 0.0)) throw std::domain_error("phi_prime_trunc: x must be >= 0");
  const double u = x - 1.0;
  KahanSum logs;
  for (std::uint32_t p : table.primes) {
    const double up = u / static_cast<double>(p);
    // 1 + up >= 1 - 1/p >= 1/2 on x >= 0
    logs.add(std::log1p(up) - up);
  }
  return std::exp(logs.value());
}

std::uint64_t phi_omega_prime_bound(double x, double error_target) {
  if (!(error_target > 0.0)) {
    throw std::domain_error("phi_omega: error_target must be > 0");
  }
  const double u = std::abs(x - 1.0);
  // Tail certificate: sum_{p > P} |log((1+u/p)e^{-u/p})|
  //   <= u^2/(2(1-u/P)) * sum_{p>P} 1/p^2 <= u^2/(2(1-u/P)) * (1/P),
  // requiring P >= 2u so the bound's denominator stays above 1/2.
  double P = std::max({64.0, 4.0 * u, u * u / error_target});
  return static_cast<std::uint64_t>(std::ceil(P));
}

double phi_omega(double x, double error_target, const PrimeTable& hint) {
  if (x == 0.0) return 0.0;
  const std::uint64_t bound = phi_omega_prime_bound(x, error_target);
  if (hint.limit >= bound) {
    // products over primes beyond the bound only sharpen the value; use the
    // whole hint table.
    return phi_c_closed(x) * phi_prime_trunc(hint, x);
  }
  return phi_c_closed(x) * phi_prime_trunc(sieve(bound), x);
}

double phi_omega(double x, double error_target) {
  if (x == 0.0) return 0.0;
  return phi_c_closed(x) * phi_prime_trunc(sieve(phi_omega_prime_bound(x, error_target)), x);
}

double phi_prime_limit(double x, double error_target, const PrimeTable& hint) {
  const std::uint64_t bound = phi_omega_prime_bound(x, error_target);
  if (hint.limit >= bound) return phi_prime_trunc(hint, x);
  return phi_prime_trunc(sieve(bound), x);
}

double phi_prime_limit(double x, double error_target) {
  return phi_prime_trunc(sieve(phi_omega_prime_bound(x, error_target)), x);
}

double phi_generic(std::span<const double> probs, double x) {
  if (!(x >= 0.0)) throw std::domain_error("phi_generic: x must be >= 0");
  const double u = x - 1.0;
  KahanSum logs;
  for (double p : probs) {
    if (!(p >= 0.0) || p > 1.0) {
      throw std::domain_error("phi_generic: probability outside [0,1]");
    }
    const double pu = p * u;
    if (1.0 + pu <= 0.0) return 0.0;  // only possible at p = 1, x = 0
    logs.add(std::log1p(pu) - pu);
  }
  return std::exp(logs.value());
}

}  // namespace omegalab
