#pragma once

#include <cstdint>

namespace ordsim::analytics {

// Exact probability that a capped-broadcast run of size n is correct under
// nonstrict ordering:
//
//   sum_{k=0}^{n} q^{n-k} (1-q)^k / k!,   q = 1 - e^{-lambda delta}
//
// evaluated ascending in k with a running 1/k! factor so no factorial is ever
// materialized. Requires n >= 1, lambda > 0, delta > 0.
[[nodiscard]] double core_correct_probability(int n, double lambda, double delta);

// Product lower bound (1 - e^{-lambda delta})^n on the same probability.
// Requires n >= 1, delta >= 0; delta = 0 gives 0.
[[nodiscard]] double core_correct_lower_bound(int n, double lambda, double delta);

// Smallest cap delta whose product bound reaches p: -ln(1 - p^{1/n}) / lambda.
// The complement overload takes 1-p instead, which preserves accuracy for
// targets too close to 1 to represent (p = 1 - 1e-9 and beyond).
[[nodiscard]] double core_delta_for_p(int n, double lambda, double p);
[[nodiscard]] double core_delta_for_p_complement(int n, double lambda, double one_minus_p);

// n-th harmonic number, summed smallest term first. Above kHarmonicExactLimit
// terms the Euler-Maclaurin expansion is used instead; its truncation error
// there is orders of magnitude below double-precision resolution.
[[nodiscard]] double harmonic(std::int64_t n);
inline constexpr std::int64_t kHarmonicExactLimit = 100'000'000;

// Mean-response-time cap for the capped broadcast: delta + H_n / lambda.
[[nodiscard]] double core_ert_upper_bound(int n, double lambda, double delta);

// Success floor of the clock-agreement phase:
//
//   max{0, 1 - (1 - x)^{2n} n^{1+sqrt(n)} - (1 + x)^{2n} n^{1-sqrt(n)}},
//   x = ln(n) / (2 sqrt(n)).
//
// Both products overflow/underflow doubles when formed literally (n^{sqrt(n)}
// blows up near n = 150), so each is evaluated as one exp of a summed
// log-space exponent. Zero for all n < 115. Requires n >= 2.
[[nodiscard]] double psi(int n);

// Stagger unit ln(n) / (lambda sqrt(n)). Requires n >= 1; n = 1 gives 0.
[[nodiscard]] double delta_sync(int n, double lambda);

// psi(n) * (1 - e^{-lambda delta / 2})^{(n+1)^2}, the correctness floor of
// the clockless broadcast. Requires n >= 2, delta >= 0.
[[nodiscard]] double pacore_correct_lower_bound(int n, double lambda, double delta);

// Cap delta whose clockless product factor reaches p:
// -2 ln(1 - p^{1/(n+1)^2}) / lambda. Complement overload as above.
[[nodiscard]] double pacore_delta_for_p(int n, double lambda, double p);
[[nodiscard]] double pacore_delta_for_p_complement(int n, double lambda, double one_minus_p);

// Mean-response-time cap for the clockless broadcast:
// 2 H_{n^2+n} / lambda + delta + 2 delta_sync(n, lambda) n.
[[nodiscard]] double pacore_ert_upper_bound(int n, double lambda, double delta);

// Smallest N such that n > -ln(1 - p^{1/n}) holds for every n from N up to
// the search ceiling: from N onward one agent per unit mean delay outruns the
// cap needed for correctness target p. Found by exhaustive scan, not by a
// closed-form approximation. Complement overload as above.
[[nodiscard]] int cutoff_n(double p);
[[nodiscard]] int cutoff_n_complement(double one_minus_p);
inline constexpr int kCutoffCeiling = 1'000'000;

}  // namespace ordsim::analytics
