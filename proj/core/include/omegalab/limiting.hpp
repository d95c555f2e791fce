#pragma once

#include <cstdint>
#include <span>

#include "omegalab/primes.hpp"

namespace omegalab {

// phi_c_trunc(k, x) = prod_{l=1..k} (1 + (x-1)/l) e^{-(x-1)/l}.
// The l = 1 factor is x e^{1-x}; the rest is accumulated in log space for
// k > 1000. Lies in [0,1] for x >= 0.
double phi_c_trunc(std::int64_t k, double x);

// Closed form of the full product: e^{-(x-1) gamma_EM} / Gamma(x), extended
// by continuity to 0 at x = 0.
double phi_c_closed(double x);

// prod over the table's primes of (1 + (x-1)/p) e^{-(x-1)/p}, log space.
double phi_prime_trunc(const PrimeTable& table, double x);

// phi_c_closed(x) times the prime product extended until the tail is
// certified below error_target via |log((1+u)e^{-u})| <= u^2 / (2(1-|u|)),
// u = (x-1)/p, valid once p >= 2|x-1|.
double phi_omega(double x, double error_target);
double phi_omega(double x, double error_target, const PrimeTable& hint);
std::uint64_t phi_omega_prime_bound(double x, double error_target);

// The prime-product factor alone, extended to the same tail certificate.
double phi_prime_limit(double x, double error_target);
double phi_prime_limit(double x, double error_target, const PrimeTable& hint);

// prod over a finite probability list of (1 + p(x-1)) e^{-p(x-1)}.
double phi_generic(std::span<const double> probs, double x);

}  // namespace omegalab
