#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/model.hpp"
#include "omegalab/primes.hpp"

namespace omegalab {

enum class Command { kRatios, kSample, kVerify };
enum class OutputFormat { kCsv, kJson };

struct RunConfig {
  Command command = Command::kRatios;
  std::uint64_t n = 1'000'000;
  std::vector<double> x_grid;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  IndexConvention convention = IndexConvention::kLemmaWeights;
  VnConvention vn_convention = VnConvention::kProof;
  double eps = 1e-12;
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  bool force = false;
  bool corrupt_tolerances = false;  // verify self-test: zero every tolerance
};

struct RatioRow {
  std::uint64_t n = 0;
  double x = 0.0;
  std::string model;
  double ratio = 0.0;
  double reference_phi = 0.0;
  double deviation = 0.0;
  std::optional<double> mc_halfwidth;  // present iff the row came from sampling
};

struct RatioTable {
  std::vector<RatioRow> rows;
};

struct SampleRow {
  double x = 0.0;
  double pgf_exact = 0.0;
  double pgf_pathwise = 0.0;
  double halfwidth_pathwise = 0.0;  // 3 sigma_hat / sqrt(N)
  double pgf_conditioned = 0.0;
  double halfwidth_conditioned = 0.0;
};

struct SampleReport {
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  std::vector<SampleRow> rows;
  double tv_pathwise_vs_exact = 0.0;
  double tv_conditioned_vs_exact = 0.0;
  double tv_pathwise_vs_conditioned = 0.0;
};

struct VerifyCheck {
  std::string name;
  std::string status;  // "pass" | "fail" | "report"
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::size_t failures() const;
};

RatioTable run_ratios(const RunConfig& cfg);
SampleReport run_sample(const RunConfig& cfg);
VerifyReport run_verify(const RunConfig& cfg);

// Serialisation. Floats carry 17 significant digits so CSV round-trips
// bit-exactly; every report embeds the config echo.
void write_ratio_csv(const RatioTable& table, const RunConfig& cfg, std::ostream& os);
void write_ratio_json(const RatioTable& table, const RunConfig& cfg, std::ostream& os);
void write_sample_csv(const SampleReport& report, const RunConfig& cfg, std::ostream& os);
void write_sample_json(const SampleReport& report, const RunConfig& cfg, std::ostream& os);
void write_verify_json(const VerifyReport& report, const RunConfig& cfg, std::ostream& os);

std::string format_double(double v);  // %.17g

// Least-squares fit of the free factor e^{c(x-1)}: returns c minimising
// sum (log r_i - log ref_i - c (x_i - 1))^2 over grid points with positive
// ratio and reference.
double fit_exponential_factor(std::span<const double> xs,
                              std::span<const double> ratios,
                              std::span<const double> refs);

}  // namespace omegalab
