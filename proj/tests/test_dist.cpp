#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "omegalab/dist.hpp"
#include "omegalab/numeric.hpp"
#include "omegalab/rng.hpp"

using namespace omegalab;

namespace {

std::vector<double> random_probs(RngStream& rng, std::size_t n) {
  std::vector<double> ps(n);
  for (double& p : ps) p = rng.uniform();
  return ps;
}

DiscreteDist random_dist(RngStream& rng, std::size_t support) {
  std::vector<double> w(support + 1);
  for (double& v : w) v = rng.uniform() + 1e-3;
  return DiscreteDist::from_weights(std::move(w));
}

double poisson_pmf(double gamma, std::size_t k) {
  return std::exp(static_cast<double>(k) * std::log(gamma) - gamma -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace

TEST_CASE("bernoulli_sum: empty list is the point mass at zero") {
  const DiscreteDist d = bernoulli_sum({});
  CHECK(d.support_max() == 0);
  CHECK(d.pmf(0) == 1.0);
}

TEST_CASE("bernoulli_sum: hand-expanded two-term convolution") {
  const std::vector<double> ps{0.5, 1.0 / 3.0};
  const DiscreteDist d = bernoulli_sum(ps);
  REQUIRE(d.support_max() == 2);
  CHECK(d.pmf(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(d.pmf(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.pmf(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("bernoulli_sum: PGF equals the product form on random inputs") {
  RngStream rng(20240901, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ps = random_probs(rng, 1 + rep % 12);
    const DiscreteDist d = bernoulli_sum(ps);
    for (double x : {0.0, 0.3, 1.0, 1.7, 3.9}) {
      double prod = 1.0;
      for (double p : ps) prod *= 1.0 + p * (x - 1.0);
      CHECK(pgf(d, x) == doctest::Approx(prod).epsilon(1e-10));
    }
  }
}

TEST_CASE("bernoulli_sum: rejects probabilities outside [0,1]") {
  CHECK_THROWS_AS(bernoulli_sum(std::vector<double>{0.5, 1.5}), std::domain_error);
  CHECK_THROWS_AS(bernoulli_sum(std::vector<double>{-0.1}), std::domain_error);
}

TEST_CASE("bernoulli_sum_capped: matches the full convolution where it matters") {
  RngStream rng(7, 3);
  std::vector<double> ps(400);
  for (double& p : ps) p = 0.02 * rng.uniform();  // mean ~ 4
  KahanSum mean;
  for (double p : ps) mean.add(p);
  const std::size_t cap = bernoulli_support_cap(mean.value());
  REQUIRE(cap < ps.size());
  const DiscreteDist full = bernoulli_sum(ps);
  const DiscreteDist capped = bernoulli_sum_capped(ps, cap);
  CHECK(total_variation(full, capped) < 1e-20);
  CHECK(pgf(capped, 2.0) == doctest::Approx(pgf(full, 2.0)).epsilon(1e-12));
}

TEST_CASE("poisson_truncated: pmf[0], mean, tail and K policy") {
  const DiscreteDist d = poisson_truncated(1.0, 1e-12);
  CHECK(d.pmf(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  for (double gamma : {0.5, 5.0}) {
    const DiscreteDist t = poisson_truncated(gamma, 1e-10);
    const double K = static_cast<double>(t.support_max());
    CHECK(std::abs(t.mean() - gamma) <= 1e-10 * K);
  }

  // recorded K: truncated tail of the plain Poisson is far below eps
  const double eps = 1e-12;
  const DiscreteDist t5 = poisson_truncated(5.0, eps);
  const std::size_t K = t5.support_max();
  double tail = 0.0;
  for (std::size_t k = K + 1; k < K + 200; ++k) tail += poisson_pmf(5.0, k);
  CHECK(tail < eps);
  // policy keeps the support tilt-closed up to x = 4 but still modest
  CHECK(K >= 20);
  CHECK(K <= 120);

  CHECK_THROWS_AS(poisson_truncated(0.0, 1e-6), std::domain_error);
  CHECK_THROWS_AS(poisson_truncated(-2.0, 1e-6), std::domain_error);
  CHECK_THROWS_AS(poisson_truncated(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(poisson_truncated(1.0, 1.0), std::domain_error);
}

TEST_CASE("tilt: rate scaling of the truncated Poisson") {
  for (double gamma : {1.0, 5.0}) {
    for (double x : {0.5, 2.0}) {
      const double tv = total_variation(tilt(poisson_truncated(gamma, 1e-14), x),
                                        poisson_truncated(x * gamma, 1e-14));
      CHECK(tv <= 1e-10);
    }
  }
}

TEST_CASE("tilt: identity at x = 1 and Bernoulli success formula") {
  RngStream rng(11, 0);
  const DiscreteDist d = random_dist(rng, 9);
  CHECK(total_variation(tilt(d, 1.0), d) < 1e-15);

  // success probability of a tilted Bernoulli(1/k) is theta/(theta + k - 1)
  const double k = 5.0, theta = 0.7;
  const DiscreteDist b = bernoulli_sum(std::vector<double>{1.0 / k});
  const DiscreteDist tb = tilt(b, theta);
  CHECK(tb.pmf(1) == doctest::Approx(theta / (theta + k - 1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(tilt(d, 0.0), std::domain_error);
  CHECK_THROWS_AS(tilt(d, -1.0), std::domain_error);
}

TEST_CASE("tilt: semigroup property tilt(tilt(d,x),y) = tilt(d,xy)") {
  RngStream rng(13, 1);
  for (int rep = 0; rep < 10; ++rep) {
    const DiscreteDist d = random_dist(rng, 3 + rep);
    const double x = 0.1 + 3.9 * rng.uniform();
    const double y = 0.1 + 3.9 * rng.uniform();
    CHECK(total_variation(tilt(tilt(d, x), y), tilt(d, x * y)) <= 1e-12);
  }
}

TEST_CASE("size_bias: Bernoulli, point masses, and the moment identity") {
  const DiscreteDist b = bernoulli_sum(std::vector<double>{0.37});
  const DiscreteDist sb = size_bias(b);
  CHECK(sb.pmf(0) == 0.0);
  CHECK(sb.pmf(1) == doctest::Approx(1.0).epsilon(1e-15));

  const DiscreteDist pm = DiscreteDist::point_mass(4);
  CHECK(total_variation(size_bias(pm), pm) == 0.0);
  CHECK_THROWS_AS(size_bias(DiscreteDist::point_mass(0)), std::domain_error);

  RngStream rng(17, 0);
  const DiscreteDist d = random_dist(rng, 7);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k <= d.support_max(); ++k) {
    m1 += static_cast<double>(k) * d.pmf(k);
    m2 += static_cast<double>(k * k) * d.pmf(k);
  }
  CHECK(size_bias(d).mean() == doctest::Approx(m2 / m1).epsilon(1e-12));
}

TEST_CASE("size_bias_iter: ell = 0, 1, 2 semantics") {
  RngStream rng(19, 0);
  const DiscreteDist d = random_dist(rng, 8);
  CHECK(total_variation(size_bias_iter(d, 0), d) == 0.0);
  CHECK(total_variation(size_bias_iter(d, 1), size_bias(d)) <= 1e-14);
  CHECK(total_variation(size_bias_iter(d, 2), size_bias(size_bias(d))) <= 1e-12);
  CHECK_THROWS_AS(size_bias_iter(DiscreteDist::point_mass(0), 1), std::domain_error);
  CHECK_THROWS_AS(size_bias_iter(d, -1), std::domain_error);
}

TEST_CASE("penalise: unit weight, conditioning indicator, tilt equivalence") {
  RngStream rng(23, 0);
  const DiscreteDist d = random_dist(rng, 6);

  CHECK(total_variation(penalise(d, [](std::size_t) { return 1.0; }), d) == 0.0);

  const DiscreteDist cond =
      penalise(d, [](std::size_t k) { return k >= 1 ? 1.0 : 0.0; });
  const double tail = 1.0 - d.pmf(0);
  for (std::size_t k = 1; k <= d.support_max(); ++k) {
    CHECK(cond.pmf(k) == doctest::Approx(d.pmf(k) / tail).epsilon(1e-12));
  }
  CHECK(cond.pmf(0) == 0.0);

  const double x = 1.7;
  const DiscreteDist via_w =
      penalise(d, [x](std::size_t k) { return std::pow(x, static_cast<double>(k)); });
  CHECK(total_variation(via_w, tilt(d, x)) <= 1e-12);

  CHECK_THROWS_AS(penalise(d, [](std::size_t) { return -1.0; }), std::domain_error);
  CHECK_THROWS_AS(penalise(d, [](std::size_t) { return 0.0; }), std::domain_error);
}

TEST_CASE("penalise by k^l x^k commutes with tilt-then-bias in either order") {
  RngStream rng(29, 0);
  const DiscreteDist d = random_dist(rng, 10);
  for (double x : {0.4, 2.6}) {
    for (int ell : {1, 2, 3}) {
      const DiscreteDist direct = penalise(d, [x, ell](std::size_t k) {
        return std::pow(static_cast<double>(k), ell) *
               std::pow(x, static_cast<double>(k));
      });
      CHECK(total_variation(direct, tilt(size_bias_iter(d, ell), x)) <= 1e-12);
      CHECK(total_variation(direct, size_bias_iter(tilt(d, x), ell)) <= 1e-12);
    }
  }
}

TEST_CASE("transform outputs stay normalised and nonnegative") {
  RngStream rng(31, 0);
  for (int rep = 0; rep < 10; ++rep) {
    DiscreteDist d = random_dist(rng, 5 + rep);
    d = tilt(d, 0.2 + 3.0 * rng.uniform());
    d = size_bias(d);
    d = penalise(d, [](std::size_t k) { return 1.0 / (1.0 + static_cast<double>(k)); });
    KahanSum total;
    for (std::size_t k = 0; k <= d.support_max(); ++k) {
      REQUIRE(d.pmf(k) >= 0.0);
      total.add(d.pmf(k));
    }
    CHECK(std::abs(total.value() - 1.0) <= 1e-12);
  }
}

TEST_CASE("pgf: basic values and the log-space guard") {
  RngStream rng(37, 0);
  const DiscreteDist d = random_dist(rng, 12);
  CHECK(pgf(d, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pgf(DiscreteDist::point_mass(3), 2.0) == doctest::Approx(8.0).epsilon(1e-15));
  const DiscreteDist b = bernoulli_sum(std::vector<double>{0.25});
  CHECK(pgf(b, 3.0) == doctest::Approx(1.0 + 0.25 * 2.0).epsilon(1e-15));

  // wide-support geometric-style pmf: support*log(x) > 600 takes the
  // log-sum-exp path; compare against the closed geometric sum
  const std::size_t K = 3000;
  std::vector<double> w(K + 1);
  for (std::size_t k = 0; k <= K; ++k) w[k] = std::pow(0.5, static_cast<double>(k));
  const DiscreteDist g = DiscreteDist::from_weights(std::move(w));
  const double x = 1.9;
  // sum (0.95)^k / sum (0.5)^k
  const double expected = (1.0 - 0.5) / (1.0 - 0.5 * x);
  CHECK(pgf(g, x) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("total_variation: axioms") {
  RngStream rng(41, 0);
  const DiscreteDist a = random_dist(rng, 6);
  const DiscreteDist b = random_dist(rng, 9);
  CHECK(total_variation(a, a) == 0.0);
  CHECK(total_variation(DiscreteDist::point_mass(0), DiscreteDist::point_mass(1)) ==
        1.0);
  CHECK(total_variation(a, b) == total_variation(b, a));
  CHECK(total_variation(a, b) >= 0.0);
  CHECK(total_variation(a, b) <= 1.0);
}

TEST_CASE("DiscreteDist: constructor validation") {
  CHECK_THROWS_AS(DiscreteDist(std::vector<double>{0.5, -0.1, 0.6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist(std::vector<double>{0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::from_weights(std::vector<double>{0.0, 0.0}),
                  std::domain_error);
  CHECK_NOTHROW(DiscreteDist(std::vector<double>{0.25, 0.75}));
}

TEST_CASE("RngStream: reproducibility and stream separation") {
  RngStream a(123, 7), b(123, 7), c(123, 8);
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    any_diff |= (ua != c.uniform());
  }
  CHECK(any_diff);
}
