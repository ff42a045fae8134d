#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ordsim/delay_source.hpp"
#include "ordsim/estimate.hpp"
#include "ordsim/protocol.hpp"
#include "ordsim/rng.hpp"

namespace ordsim {

// How a batch of Monte Carlo trials is seeded and scheduled. Trial i always
// draws from split_stream(master_seed, i); the worker count only chooses how
// the index range is chunked across threads, never what any trial sees, so
// results are identical for any worker count.
struct TrialPlan {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  unsigned workers = 0;  // 0 means use the hardware concurrency

  void validate() const {
    if (trials == 0) throw std::invalid_argument("TrialPlan: trials must be > 0");
  }
};

namespace detail {

inline unsigned resolved_workers(const TrialPlan& plan) {
  unsigned w = plan.workers != 0 ? plan.workers : std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  if (static_cast<std::uint64_t>(w) > plan.trials) {
    w = static_cast<unsigned>(plan.trials);
  }
  return w;
}

}  // namespace detail

// Runs body(trial_index, stream) for every trial in the plan and returns the
// results in trial order. Threads own contiguous index blocks and write into
// preallocated slots, so the schedule cannot reorder anything. The first
// failing trial (by index, not by wall clock) is reported.
template <typename T, typename Body>
std::vector<T> run_trials(const TrialPlan& plan, Body&& body) {
  plan.validate();
  const unsigned workers = detail::resolved_workers(plan);
  std::vector<T> results(plan.trials);

  if (workers == 1) {
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      results[i] = body(i, split_stream(plan.master_seed, i));
    }
    return results;
  }

  struct Failure {
    std::uint64_t trial;
    std::exception_ptr error;
  };
  std::vector<std::optional<Failure>> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);

  const std::uint64_t chunk = (plan.trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
    const std::uint64_t hi = std::min(plan.trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi, w] {
      for (std::uint64_t i = lo; i < hi; ++i) {
        try {
          results[i] = body(i, split_stream(plan.master_seed, i));
        } catch (...) {
          failures[w] = Failure{i, std::current_exception()};
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  const Failure* first = nullptr;
  for (const auto& f : failures) {
    if (f && (first == nullptr || f->trial < first->trial)) first = &*f;
  }
  if (first != nullptr) {
    try {
      std::rethrow_exception(first->error);
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(first->trial) + ": " + e.what());
    }
  }
  return results;
}

// One protocol simulated many times, summarized.
struct SimulationSummary {
  Estimate correct_nonstrict;
  Estimate correct_strict;
  Estimate response_time;
  Estimate messages;
  std::int64_t messages_min = 0;
  std::int64_t messages_max = 0;
  // Present for the adjusted-clock protocols: how often the clock-agreement
  // phase landed every hypothesis within 2*delta of the others.
  std::optional<Estimate> delta_synchronized;
};

SimulationSummary simulate_protocol(const ProtocolConfig& config, const TrialPlan& plan);

// Proportion of runs whose action times were sorted (ties allowed),
// Wilson 95% interval. Requires trials >= 100.
Estimate estimate_correctness(const ProtocolConfig& config, const TrialPlan& plan);

// Sample mean of the response time (latest action time), normal 95% interval.
// Requires trials >= 100.
Estimate estimate_ert(const ProtocolConfig& config, const TrialPlan& plan);

// Clock-agreement quality measured directly on the hypothesis vector
// (T_1, ..., T_n), without running the full protocol.
enum class SyncMode {
  Independent,  // every agent draws its n composite delays freshly
  Correlated,   // agents share the trigger legs, as the real protocol does
};

std::string_view sync_mode_name(SyncMode mode);

struct SyncExperimentConfig {
  int n = 2;  // agents in the vector; composite count per agent is also n
  Rate lambda{1.0};
  SyncMode mode = SyncMode::Independent;
  // Per-leg delay override; each composite costs two draws. Defaults to
  // exponential(lambda).
  std::optional<DelaySource> delay;

  void validate() const;
};

struct SyncResult {
  Estimate pairwise;    // P(max T - min T <= 2*delta)
  Estimate individual;  // P(max |T_k| <= delta), the stricter per-agent form
  double delta = 0.0;   // ln(n) / (lambda * sqrt(n))
  double floor = 0.0;   // analytic lower bound shared by both forms
};

SyncResult sync_probability_experiment(const SyncExperimentConfig& config,
                                       const TrialPlan& plan);

// Smallest-n table for the "how many agents buy how many nines" curve.
struct CutoffPoint {
  double one_minus_p = 0.0;  // complement of the correctness target
  int cutoff = 0;            // first n whose optimal cap beats the chain bound
};

std::vector<CutoffPoint> cutoff_curve_complement(const std::vector<double>& one_minus_ps);
std::vector<CutoffPoint> cutoff_curve(const std::vector<double>& ps);

// Monte Carlo point vs. analytic bound, one row per estimator.
enum class BoundRule {
  LowerProb,  // bound must not exceed the CI upper end
  UpperMean,  // sample mean must not exceed bound + 3*SE
  LowerMean,  // sample mean must not fall below bound - 3*SE
};

std::string_view bound_rule_name(BoundRule rule);

struct BoundRow {
  std::string name;  // "<protocol>/correctness" or "<protocol>/response-time"
  int n = 0;
  double lambda = 0.0;
  double delta = 0.0;  // NaN when the protocol takes no cap
  std::uint64_t trials = 0;
  Estimate estimate;
  double bound = 0.0;
  BoundRule rule = BoundRule::LowerProb;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  bool all_pass = true;
};

// Simulates the protocol once and checks both of its analytic bounds:
// a correctness floor and a response-time bound (an expectation lower bound
// for the chain, upper bounds elsewhere). FAIL verdicts are data, not errors.
BoundReport compare_bounds(const ProtocolConfig& config, const TrialPlan& plan);

// Rows in the same shape for the clock-agreement experiment, so the report
// writer treats both alike.
BoundReport sync_report(const SyncExperimentConfig& config, const SyncResult& result);

}  // namespace ordsim
