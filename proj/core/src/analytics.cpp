#include "ordsim/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ordsim::analytics {

namespace {

constexpr double kEulerMascheroni = 0.57721566490153286;
constexpr double kClampSlack = 1e-12;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Probabilities are clamped to [0,1] after floating-point evaluation, but a
// value outside the interval by more than rounding noise is a formula bug,
// not noise, and must not be papered over.
double clamp_probability(double v, const char* what) {
  if (!(v >= -kClampSlack) || !(v <= 1.0 + kClampSlack)) {
    throw std::logic_error(std::string(what) + ": value " + std::to_string(v) +
                           " escapes [0,1] beyond clamping tolerance");
  }
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

}  // namespace

double core_correct_probability(int n, double lambda, double delta) {
  require(n >= 1, "core_correct_probability: n must be >= 1");
  require(lambda > 0.0, "core_correct_probability: lambda must be > 0");
  require(delta > 0.0, "core_correct_probability: delta must be > 0");

  const double miss = std::exp(-lambda * delta);  // 1 - q
  if (miss == 0.0) return 1.0;
  const double q = -std::expm1(-lambda * delta);
  const double ln_q = std::log1p(-miss);

  double term = std::exp(static_cast<double>(n) * ln_q);  // q^n
  if (term > 0.0) {
    double sum = term;
    for (int k = 1; k <= n; ++k) {
      term *= miss / (q * k);
      sum += term;
      if (term == 0.0) break;  // ratio shrinks with k; later terms stay zero
    }
    return clamp_probability(sum, "core_correct_probability");
  }

  // q^n underflowed. Rebuild each term from its log; ln(1-q) = -lambda*delta
  // exactly, which keeps the k-heavy terms accurate.
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += std::exp((n - k) * ln_q + k * (-lambda * delta) - std::lgamma(k + 1.0));
  }
  return clamp_probability(sum, "core_correct_probability");
}

double core_correct_lower_bound(int n, double lambda, double delta) {
  require(n >= 1, "core_correct_lower_bound: n must be >= 1");
  require(lambda > 0.0, "core_correct_lower_bound: lambda must be > 0");
  require(delta >= 0.0, "core_correct_lower_bound: delta must be >= 0");
  const double v = std::exp(static_cast<double>(n) * std::log1p(-std::exp(-lambda * delta)));
  return clamp_probability(v, "core_correct_lower_bound");
}

double core_delta_for_p_complement(int n, double lambda, double one_minus_p) {
  require(n >= 1, "core_delta_for_p: n must be >= 1");
  require(lambda > 0.0, "core_delta_for_p: lambda must be > 0");
  require(one_minus_p > 0.0 && one_minus_p < 1.0,
          "core_delta_for_p: p must lie strictly inside (0, 1)");
  const double ln_p = std::log1p(-one_minus_p);
  const double one_minus_root = -std::expm1(ln_p / n);  // 1 - p^{1/n}
  return -std::log(one_minus_root) / lambda;
}

double core_delta_for_p(int n, double lambda, double p) {
  require(p > 0.0 && p < 1.0, "core_delta_for_p: p must lie strictly inside (0, 1)");
  return core_delta_for_p_complement(n, lambda, 1.0 - p);
}

double harmonic(std::int64_t n) {
  require(n >= 1, "harmonic: n must be >= 1");
  if (n <= kHarmonicExactLimit) {
    double sum = 0.0;
    for (std::int64_t m = n; m >= 1; --m) sum += 1.0 / static_cast<double>(m);
    return sum;
  }
  const double dn = static_cast<double>(n);
  return std::log(dn) + kEulerMascheroni + 1.0 / (2.0 * dn) - 1.0 / (12.0 * dn * dn);
}

double core_ert_upper_bound(int n, double lambda, double delta) {
  require(n >= 1, "core_ert_upper_bound: n must be >= 1");
  require(lambda > 0.0, "core_ert_upper_bound: lambda must be > 0");
  require(delta >= 0.0, "core_ert_upper_bound: delta must be >= 0");
  return delta + harmonic(n) / lambda;
}

double psi(int n) {
  require(n >= 2, "psi: n must be >= 2");
  const double dn = static_cast<double>(n);
  const double root = std::sqrt(dn);
  const double ln_n = std::log(dn);
  const double x = ln_n / (2.0 * root);  // < 1/e for every n >= 2
  const double low_exponent = 2.0 * dn * std::log1p(-x) + (1.0 + root) * ln_n;
  const double high_exponent = 2.0 * dn * std::log1p(x) + (1.0 - root) * ln_n;
  const double raw = 1.0 - std::exp(low_exponent) - std::exp(high_exponent);
  return raw > 0.0 ? raw : 0.0;
}

double delta_sync(int n, double lambda) {
  require(n >= 1, "delta_sync: n must be >= 1");
  require(lambda > 0.0, "delta_sync: lambda must be > 0");
  const double dn = static_cast<double>(n);
  return std::log(dn) / (lambda * std::sqrt(dn));
}

double pacore_correct_lower_bound(int n, double lambda, double delta) {
  require(n >= 2, "pacore_correct_lower_bound: n must be >= 2");
  require(lambda > 0.0, "pacore_correct_lower_bound: lambda must be > 0");
  require(delta >= 0.0, "pacore_correct_lower_bound: delta must be >= 0");
  const double workers_sq = static_cast<double>(n + 1) * static_cast<double>(n + 1);
  const double ln_factor = std::log1p(-std::exp(-0.5 * lambda * delta));
  const double v = psi(n) * std::exp(workers_sq * ln_factor);
  return clamp_probability(v, "pacore_correct_lower_bound");
}

double pacore_delta_for_p_complement(int n, double lambda, double one_minus_p) {
  require(n >= 1, "pacore_delta_for_p: n must be >= 1");
  require(lambda > 0.0, "pacore_delta_for_p: lambda must be > 0");
  require(one_minus_p > 0.0 && one_minus_p < 1.0,
          "pacore_delta_for_p: p must lie strictly inside (0, 1)");
  const double workers_sq = static_cast<double>(n + 1) * static_cast<double>(n + 1);
  const double ln_p = std::log1p(-one_minus_p);
  const double one_minus_root = -std::expm1(ln_p / workers_sq);
  return -2.0 * std::log(one_minus_root) / lambda;
}

double pacore_delta_for_p(int n, double lambda, double p) {
  require(p > 0.0 && p < 1.0, "pacore_delta_for_p: p must lie strictly inside (0, 1)");
  return pacore_delta_for_p_complement(n, lambda, 1.0 - p);
}

double pacore_ert_upper_bound(int n, double lambda, double delta) {
  require(n >= 1, "pacore_ert_upper_bound: n must be >= 1");
  require(lambda > 0.0, "pacore_ert_upper_bound: lambda must be > 0");
  require(delta >= 0.0, "pacore_ert_upper_bound: delta must be >= 0");
  const std::int64_t chain_len = static_cast<std::int64_t>(n) * n + n;
  return 2.0 * harmonic(chain_len) / lambda + delta + 2.0 * delta_sync(n, lambda) * n;
}

int cutoff_n_complement(double one_minus_p) {
  require(one_minus_p > 0.0 && one_minus_p < 1.0,
          "cutoff_n: p must lie strictly inside (0, 1)");
  const double ln_p = std::log1p(-one_minus_p);
  // Exhaustive scan: record the last n whose required cap still reaches n,
  // then report the next integer. No closed-form shortcut; the scan is cheap
  // and immune to the fixed-point equation's flat slope near the crossing.
  int last_fail = 0;
  for (int n = 1; n <= kCutoffCeiling; ++n) {
    const double delta_n = -std::log(-std::expm1(ln_p / n));
    if (static_cast<double>(n) <= delta_n) last_fail = n;
  }
  return last_fail + 1;
}

int cutoff_n(double p) {
  require(p > 0.0 && p < 1.0, "cutoff_n: p must lie strictly inside (0, 1)");
  return cutoff_n_complement(1.0 - p);
}

}  // namespace ordsim::analytics
