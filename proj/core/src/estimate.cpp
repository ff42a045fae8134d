#include "ordsim/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace ordsim {

Estimate wilson_proportion(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_proportion: trials must be > 0");
  if (successes > trials) {
    throw std::invalid_argument("wilson_proportion: successes exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z = kZ95;
  const double z2 = z * z;

  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));

  Estimate e;
  e.point = p;
  e.std_error = std::sqrt(p * (1.0 - p) / n);
  e.ci_low = std::max(0.0, center - half);
  e.ci_high = std::min(1.0, center + half);
  // The score interval always contains the sample proportion.
  e.ci_low = std::min(e.ci_low, p);
  e.ci_high = std::max(e.ci_high, p);
  e.trials = trials;
  return e;
}

Estimate mean_with_normal_ci(const std::vector<double>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("mean_with_normal_ci: need at least one sample");
  }
  const double n = static_cast<double>(samples.size());

  // Bit-identical samples must report exactly zero dispersion; summing first
  // and dividing would smuggle in rounding noise.
  bool all_same = true;
  for (double x : samples) {
    if (x != samples.front()) {
      all_same = false;
      break;
    }
  }
  if (all_same) {
    Estimate e;
    e.point = samples.front();
    e.std_error = 0.0;
    e.ci_low = e.point;
    e.ci_high = e.point;
    e.trials = samples.size();
    return e;
  }

  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;

  double ss = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    ss += d * d;
  }
  const double variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
  const double se = std::sqrt(variance / n);

  Estimate e;
  e.point = mean;
  e.std_error = se;
  e.ci_low = mean - kZ95 * se;
  e.ci_high = mean + kZ95 * se;
  e.trials = samples.size();
  return e;
}

}  // namespace ordsim
