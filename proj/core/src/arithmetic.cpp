#include "omegalab/arithmetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "omegalab/limiting.hpp"
#include "omegalab/model.hpp"
#include "omegalab/numeric.hpp"

namespace omegalab {

OmegaTable omega_sieve(std::uint64_t n) {
  if (n < 1) throw std::domain_error("omega_sieve: n must be >= 1");
  if (n > kSieveLimitMax) {
    throw std::length_error("omega_sieve: n = " + std::to_string(n) +
                            " exceeds the memory budget of 1e8");
  }
  OmegaTable table;
  table.limit = n;
  table.omega.assign(n + 1, 0);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (table.omega[p] == 0) {  // untouched so far => prime
      for (std::uint64_t m = p; m <= n; m += p) ++table.omega[m];
    }
  }
  return table;
}

DiscreteDist dist_omega_uniform(const OmegaTable& table) {
  std::uint8_t max_omega = 0;
  for (std::uint64_t m = 1; m <= table.limit; ++m) {
    max_omega = std::max(max_omega, table.omega[m]);
  }
  std::vector<double> counts(static_cast<std::size_t>(max_omega) + 1, 0.0);
  for (std::uint64_t m = 1; m <= table.limit; ++m) {
    counts[table.omega[m]] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(table.limit);
  return DiscreteDist::from_weights(std::move(counts));
}

DiscreteDist dist_omega_uniform(std::uint64_t n) {
  return dist_omega_uniform(omega_sieve(n));
}

double sathe_selberg_ratio(const OmegaTable& omega, const PrimeTable& table,
                           double x) {
  if (omega.limit < 3) throw std::domain_error("sathe_selberg_ratio: n must be >= 3");
  const DiscreteDist d = dist_omega_uniform(omega);
  return mod_poisson_ratio(pgf(d, x), table.gamma(), x);
}

double sathe_selberg_ratio(std::uint64_t n, double x) {
  return sathe_selberg_ratio(omega_sieve(n), sieve(n), x);
}

RatioTable local_limit_report(std::uint64_t n) {
  if (n < 1000) throw std::domain_error("local_limit_report: n must be >= 1e3");
  const OmegaTable omega = omega_sieve(n);
  const PrimeTable table = sieve(n);
  const double gamma = std::log(std::log(static_cast<double>(n)));
  const DiscreteDist arith = dist_omega_uniform(omega);

  const PrimeTable phi_table = sieve(4'000'000);
  auto phi = [&](double x) { return phi_omega(x, 1e-6, phi_table); };
  const DiscreteDist q = dist_q(phi, gamma, 1e-12);

  const int k_max = static_cast<int>(2.0 * gamma);
  RatioTable out;
  for (int k = 1; k <= k_max; ++k) {
    const double pk = arith.pmf(static_cast<std::size_t>(k));
    const double log_pois = static_cast<double>(k) * std::log(gamma) - gamma -
                            std::lgamma(static_cast<double>(k) + 1.0);
    const double pois_phi = std::exp(log_pois) * phi(static_cast<double>(k) / gamma);
    RatioRow row1{n, static_cast<double>(k), "local_poisson_phi",
                  pk, pois_phi, std::abs(pk - pois_phi), std::nullopt};
    RatioRow row2{n, static_cast<double>(k), "local_Q",
                  pk, q.pmf(static_cast<std::size_t>(k)),
                  std::abs(pk - q.pmf(static_cast<std::size_t>(k))), std::nullopt};
    out.rows.push_back(row1);
    out.rows.push_back(row2);
  }
  return out;
}

double erdos_kac_stat(const DiscreteDist& d, double gamma) {
  if (!(gamma > 1.0)) throw std::domain_error("erdos_kac_stat: gamma must be > 1");
  const double sd = std::sqrt(gamma);
  double ks = 0.0;
  double cdf = 0.0;
  const auto probs = d.probs();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double z = (static_cast<double>(k) - gamma) / sd;
    const double normal_cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    ks = std::max(ks, std::abs(cdf - normal_cdf));  // left limit at the jump
    cdf += probs[k];
    ks = std::max(ks, std::abs(cdf - normal_cdf));  // right value
  }
  return ks;
}

}  // namespace omegalab
