// omegalab: exact distributions, samplers and reports for mod-Poisson models
// of the prime-divisor count of a uniform random integer.
//
// Subcommands:
//   ratios  exact mod-Poisson ratios of every model against its limit function
//   sample  Monte Carlo check of the pathwise sampler against the exact law
//   verify  identity suite; exit 1 on any failed check, JSON verdict

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omegalab/report.hpp"

namespace {

constexpr std::uint64_t kMaxN = 100'000'000;
constexpr std::uint64_t kMaxSamples = 1'000'000'000;

int write_report(const omegalab::RunConfig& cfg,
                 const std::function<void(std::ostream&)>& writer) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    writer(std::cout);
    return 0;
  }
  std::ofstream os(cfg.output_path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output file: " << cfg.output_path << "\n";
    return 1;
  }
  writer(os);
  os.flush();
  if (!os) {
    std::cerr << "error: write failed: " << cfg.output_path << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using omegalab::RunConfig;

  CLI::App app{"mod-Poisson model laboratory for prime divisor counts"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  RunConfig cfg;
  std::string convention = "lemma";
  std::string vn_convention = "proof";
  std::string format = "csv";

  auto add_common = [&](CLI::App* sub, bool needs_x) {
    sub->add_option("--n", cfg.n, "scale parameter n");
    auto* x = sub->add_option("--x", cfg.x_grid, "PGF evaluation point (repeatable)");
    if (needs_x) x->required();
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--convention", convention, "index law: lemma | paper")
        ->check(CLI::IsMember({"lemma", "paper"}));
    sub->add_option("--vn-convention", vn_convention,
                    "v_n definition: proof | notation")
        ->check(CLI::IsMember({"proof", "notation"}));
    sub->add_option("--eps", cfg.eps, "Poisson truncation epsilon")
        ->check(CLI::Range(1e-300, 1.0));
    sub->add_option("--out", cfg.output_path, "output path ('-' for stdout)");
    sub->add_option("--format", format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--force", cfg.force, "lift the desk-scale guardrails");
  };

  CLI::App* ratios = app.add_subcommand("ratios", "exact mod-Poisson ratio table");
  add_common(ratios, true);

  CLI::App* sample = app.add_subcommand("sample", "Monte Carlo sampler report");
  add_common(sample, true);
  sample->add_option("--samples", cfg.samples, "number of draws")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the identity suite");
  add_common(verify, false);
  verify->add_flag("--corrupt-tolerances", cfg.corrupt_tolerances,
                   "self-test: zero every tolerance so the suite must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  cfg.convention = convention == "lemma" ? omegalab::IndexConvention::kLemmaWeights
                                         : omegalab::IndexConvention::kPaperLiteral;
  cfg.vn_convention = vn_convention == "proof" ? omegalab::VnConvention::kProof
                                               : omegalab::VnConvention::kNotation;
  cfg.format = format == "csv" ? omegalab::OutputFormat::kCsv
                               : omegalab::OutputFormat::kJson;

  if (!cfg.force && cfg.n > kMaxN) {
    std::cerr << "error: n > 1e8 requires --force\n";
    return 2;
  }
  if (!cfg.force && cfg.samples > kMaxSamples) {
    std::cerr << "error: samples > 1e9 requires --force\n";
    return 2;
  }

  try {
    if (ratios->parsed()) {
      cfg.command = omegalab::Command::kRatios;
      const auto table = omegalab::run_ratios(cfg);
      return write_report(cfg, [&](std::ostream& os) {
        if (cfg.format == omegalab::OutputFormat::kCsv) {
          omegalab::write_ratio_csv(table, cfg, os);
        } else {
          omegalab::write_ratio_json(table, cfg, os);
        }
      });
    }
    if (sample->parsed()) {
      cfg.command = omegalab::Command::kSample;
      const auto report = omegalab::run_sample(cfg);
      return write_report(cfg, [&](std::ostream& os) {
        if (cfg.format == omegalab::OutputFormat::kCsv) {
          omegalab::write_sample_csv(report, cfg, os);
        } else {
          omegalab::write_sample_json(report, cfg, os);
        }
      });
    }
    cfg.command = omegalab::Command::kVerify;
    const auto report = omegalab::run_verify(cfg);
    const int rc = write_report(cfg, [&](std::ostream& os) {
      omegalab::write_verify_json(report, cfg, os);
    });
    if (rc != 0) return rc;
    if (report.failures() > 0) {
      std::cerr << report.failures() << " verification check(s) failed\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
