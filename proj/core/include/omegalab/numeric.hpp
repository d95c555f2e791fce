#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace omegalab {

// Euler-Mascheroni constant, 30 significant digits.
inline constexpr double kEulerMascheroni = 0.577215664901532860606512090082;

// Neumaier-compensated accumulator. Summation order matters for
// reproducibility, so callers feed terms in a fixed order (ascending).
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_sum_exp(std::span<const double> logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  KahanSum acc;
  for (double v : logs) acc.add(std::exp(v - m));
  return m + std::log(acc.value());
}

}  // namespace omegalab
