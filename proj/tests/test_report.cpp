#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "omegalab/report.hpp"

using namespace omegalab;

namespace {

RunConfig ratios_config() {
  RunConfig cfg;
  cfg.command = Command::kRatios;
  cfg.n = 10'000;
  cfg.x_grid = {0.0, 0.5, 1.0, 2.0};
  cfg.seed = 7;
  return cfg;
}

const RatioRow* find_row(const RatioTable& t, const std::string& model, double x) {
  for (const auto& r : t.rows) {
    if (r.model == model && r.x == x) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("fit_exponential_factor: recovers a planted exponential") {
  const std::vector<double> xs{0.5, 0.75, 1.25, 1.5, 2.0};
  std::vector<double> refs{0.7, 0.8, 0.9, 0.85, 0.5};
  std::vector<double> ratios(xs.size());
  const double c = 0.31;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ratios[i] = refs[i] * std::exp(c * (xs[i] - 1.0));
  }
  CHECK(fit_exponential_factor(xs, ratios, refs) ==
        doctest::Approx(c).epsilon(1e-12));
  // zero-ratio and zero-reference points are ignored, not fatal
  ratios.push_back(0.0);
  refs.push_back(0.4);
  std::vector<double> xs2 = xs;
  xs2.push_back(0.0);
  CHECK(fit_exponential_factor(xs2, ratios, refs) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("run_ratios: deterministic, unit rows, model ordering facts") {
  const RunConfig cfg = ratios_config();
  const RatioTable a = run_ratios(cfg);
  const RatioTable b = run_ratios(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].model == b.rows[i].model);
    CHECK(a.rows[i].ratio == b.rows[i].ratio);  // bit-identical
    CHECK(a.rows[i].deviation ==
          std::abs(a.rows[i].ratio - a.rows[i].reference_phi));
  }

  for (const char* model : {"indep", "hybrid", "prime", "dprime", "Q", "arithmetic"}) {
    const RatioRow* row = find_row(a, model, 1.0);
    REQUIRE(row != nullptr);
    CHECK(row->ratio == doctest::Approx(1.0).epsilon(1e-12));
  }

  // the penalised model outperforms the independent model against the full
  // limit function
  const RatioRow* dprime = find_row(a, "dprime", 2.0);
  const RatioRow* indep = find_row(a, "indep", 2.0);
  REQUIRE(dprime != nullptr);
  REQUIRE(indep != nullptr);
  CHECK(dprime->deviation <
        std::abs(indep->ratio - dprime->reference_phi));

  // x = 0 rows: the full limit function vanishes
  const RatioRow* at0 = find_row(a, "dprime", 0.0);
  REQUIRE(at0 != nullptr);
  CHECK(at0->reference_phi == 0.0);

  RunConfig bad = cfg;
  bad.x_grid.clear();
  CHECK_THROWS_AS(run_ratios(bad), std::domain_error);
}

TEST_CASE("CSV writer: header, config echo, 17-digit round trip") {
  const RunConfig cfg = ratios_config();
  const RatioTable t = run_ratios(cfg);
  std::ostringstream os;
  write_ratio_csv(t, cfg, os);
  const std::string text = os.str();
  CHECK(text.find("# command=ratios") == 0);
  CHECK(text.find("n,x,model,ratio,reference_phi,deviation,mc_halfwidth\n") !=
        std::string::npos);

  // round-trip one ratio through its serialised form
  const std::string s = format_double(t.rows[1].ratio);
  CHECK(std::stod(s) == t.rows[1].ratio);

  std::ostringstream os2;
  write_ratio_csv(t, cfg, os2);
  CHECK(os.str() == os2.str());  // byte identical
}

TEST_CASE("run_sample: coupled samplers, honest halfwidths, validation") {
  RunConfig cfg;
  cfg.command = Command::kSample;
  cfg.n = 1000;
  cfg.samples = 4000;
  cfg.x_grid = {0.5, 1.5};
  cfg.seed = 3;

  const SampleReport r = run_sample(cfg);
  CHECK(r.samples == 4000);
  CHECK(r.tv_pathwise_vs_conditioned == 0.0);  // identical under coupled seeds
  CHECK(r.tv_pathwise_vs_exact == r.tv_conditioned_vs_exact);
  CHECK(r.tv_pathwise_vs_exact > 0.0);
  CHECK(r.tv_pathwise_vs_exact < 0.1);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.halfwidth_pathwise > 0.0);
    CHECK(row.pgf_pathwise == row.pgf_conditioned);
    // at this sample size the Monte Carlo width dominates the model bias
    CHECK(std::abs(row.pgf_pathwise - row.pgf_exact) <=
          5.0 * row.halfwidth_pathwise + 0.05);
  }

  // determinism across calls
  const SampleReport r2 = run_sample(cfg);
  CHECK(r2.rows[0].pgf_pathwise == r.rows[0].pgf_pathwise);
  CHECK(r2.tv_pathwise_vs_exact == r.tv_pathwise_vs_exact);

  RunConfig bad = cfg;
  bad.samples = 10;
  CHECK_THROWS_AS(run_sample(bad), std::domain_error);
  bad = cfg;
  bad.x_grid.clear();
  CHECK_THROWS_AS(run_sample(bad), std::domain_error);
}

TEST_CASE("run_verify: clean by default, everything fails at zero tolerance") {
  RunConfig cfg;
  cfg.command = Command::kVerify;
  const VerifyReport ok = run_verify(cfg);
  CHECK(ok.failures() == 0);
  CHECK(!ok.checks.empty());

  std::size_t reports = 0;
  for (const auto& c : ok.checks) {
    if (c.status == "report") ++reports;
  }
  CHECK(reports > 0);  // pathwise deviations are reported, not asserted

  cfg.corrupt_tolerances = true;
  const VerifyReport broken = run_verify(cfg);
  CHECK(broken.failures() > 0);
}

TEST_CASE("verify JSON: machine readable and carries the config echo") {
  RunConfig cfg;
  cfg.command = Command::kVerify;
  const VerifyReport r = run_verify(cfg);
  std::ostringstream os;
  write_verify_json(r, cfg, os);
  const std::string text = os.str();
  CHECK(text.find("\"failures\": 0") != std::string::npos);
  CHECK(text.find("\"command\": \"verify\"") != std::string::npos);
  CHECK(text.find("tilt_poisson_rate_scaling") != std::string::npos);
}
