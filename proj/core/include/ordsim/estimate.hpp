#pragma once

#include <cstdint>
#include <vector>

namespace ordsim {

// Two-sided 95% normal quantile used for every interval in the library.
inline constexpr double kZ95 = 1.959963984540054;

// A Monte Carlo point estimate with its uncertainty. For proportions the
// interval is Wilson's score interval; for means it is the normal interval
// around the sample mean. ci_low <= point <= ci_high always holds.
struct Estimate {
  double point = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
};

// Wilson score interval for a binomial proportion at 95% confidence.
// Degenerate inputs (trials == 0) are rejected.
Estimate wilson_proportion(std::uint64_t successes, std::uint64_t trials);

// Sample mean with a normal-approximation 95% interval. The standard error
// uses the unbiased sample variance; a single observation gets zero width.
Estimate mean_with_normal_ci(const std::vector<double>& samples);

}  // namespace ordsim
