#include "ordsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordsim/analytics.hpp"

namespace ordsim {

namespace {

void require_trials(const TrialPlan& plan, std::uint64_t floor, const char* who) {
  if (plan.trials < floor) {
    throw std::invalid_argument(std::string(who) + ": needs at least " +
                                std::to_string(floor) + " trials");
  }
}

bool bound_holds(const Estimate& e, double bound, BoundRule rule) {
  switch (rule) {
    case BoundRule::LowerProb: return bound <= e.ci_high;
    case BoundRule::UpperMean: return e.point <= bound + 3.0 * e.std_error;
    case BoundRule::LowerMean: return e.point >= bound - 3.0 * e.std_error;
  }
  throw std::logic_error("bound_holds: unreachable");
}

}  // namespace

SimulationSummary simulate_protocol(const ProtocolConfig& config, const TrialPlan& plan) {
  config.validate();
  const auto records = run_trials<RunRecord>(
      plan, [&config](std::uint64_t, const RngStream& stream) {
        return run_protocol(config, stream);
      });

  std::uint64_t nonstrict = 0, strict = 0, synced = 0;
  std::vector<double> rts, msgs;
  rts.reserve(records.size());
  msgs.reserve(records.size());
  std::int64_t msg_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t msg_max = std::numeric_limits<std::int64_t>::min();
  for (const RunRecord& r : records) {
    nonstrict += r.correct_nonstrict ? 1 : 0;
    strict += r.correct_strict ? 1 : 0;
    if (r.delta_synchronized && *r.delta_synchronized) synced += 1;
    rts.push_back(r.response_time);
    msgs.push_back(static_cast<double>(r.messages_sent));
    msg_min = std::min(msg_min, r.messages_sent);
    msg_max = std::max(msg_max, r.messages_sent);
  }

  SimulationSummary s;
  s.correct_nonstrict = wilson_proportion(nonstrict, plan.trials);
  s.correct_strict = wilson_proportion(strict, plan.trials);
  s.response_time = mean_with_normal_ci(rts);
  s.messages = mean_with_normal_ci(msgs);
  s.messages_min = msg_min;
  s.messages_max = msg_max;
  if (config.uses_adjusted_clocks()) {
    s.delta_synchronized = wilson_proportion(synced, plan.trials);
  }
  return s;
}

Estimate estimate_correctness(const ProtocolConfig& config, const TrialPlan& plan) {
  require_trials(plan, 100, "estimate_correctness");
  return simulate_protocol(config, plan).correct_nonstrict;
}

Estimate estimate_ert(const ProtocolConfig& config, const TrialPlan& plan) {
  require_trials(plan, 100, "estimate_ert");
  return simulate_protocol(config, plan).response_time;
}

std::string_view sync_mode_name(SyncMode mode) {
  return mode == SyncMode::Independent ? "independent" : "correlated";
}

void SyncExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("SyncExperimentConfig: n must be >= 2");
}

SyncResult sync_probability_experiment(const SyncExperimentConfig& config,
                                       const TrialPlan& plan) {
  config.validate();
  require_trials(plan, 100, "sync_probability_experiment");

  const double lambda = config.lambda.per_second();
  const double delta = analytics::delta_sync(config.n, lambda);
  const int n = config.n;

  struct Flags {
    bool pairwise = false;
    bool individual = false;
  };

  const auto flags = run_trials<Flags>(
      plan, [&config, n, lambda, delta](std::uint64_t, const RngStream& stream) {
        RngStream legs = stream.derive(0);
        DelaySource src =
            config.delay ? *config.delay : DelaySource::exponential(config.lambda);

        std::vector<double> hypo(static_cast<std::size_t>(n));
        if (config.mode == SyncMode::Independent) {
          for (int k = 0; k < n; ++k) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
              sum += src.sample(legs) + src.sample(legs);
            }
            hypo[k] = sum / n - 2.0 / lambda;
          }
        } else {
          // Shared trigger legs, one per sender; the redirect leg is fresh
          // per (sender, receiver) pair, and nobody hears from itself.
          std::vector<double> trigger(static_cast<std::size_t>(n) + 1);
          for (double& t : trigger) t = src.sample(legs);
          for (int k = 0; k < n; ++k) {
            double sum = 0.0;
            for (int j = 0; j <= n; ++j) {
              if (j == k) continue;
              sum += trigger[j] + src.sample(legs);
            }
            hypo[k] = sum / n - 2.0 / lambda;
          }
        }

        double lo = hypo[0], hi = hypo[0], abs_max = std::fabs(hypo[0]);
        for (double t : hypo) {
          lo = std::min(lo, t);
          hi = std::max(hi, t);
          abs_max = std::max(abs_max, std::fabs(t));
        }
        return Flags{hi - lo <= 2.0 * delta, abs_max <= delta};
      });

  std::uint64_t pairwise = 0, individual = 0;
  for (const Flags& f : flags) {
    pairwise += f.pairwise ? 1 : 0;
    individual += f.individual ? 1 : 0;
  }

  SyncResult r;
  r.pairwise = wilson_proportion(pairwise, plan.trials);
  r.individual = wilson_proportion(individual, plan.trials);
  r.delta = delta;
  r.floor = analytics::psi(config.n);
  return r;
}

std::vector<CutoffPoint> cutoff_curve_complement(const std::vector<double>& one_minus_ps) {
  std::vector<CutoffPoint> out;
  out.reserve(one_minus_ps.size());
  for (double q : one_minus_ps) {
    out.push_back(CutoffPoint{q, analytics::cutoff_n_complement(q)});
  }
  return out;
}

std::vector<CutoffPoint> cutoff_curve(const std::vector<double>& ps) {
  std::vector<CutoffPoint> out;
  out.reserve(ps.size());
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("cutoff_curve: p must lie in (0,1)");
    }
    out.push_back(CutoffPoint{1.0 - p, analytics::cutoff_n(p)});
  }
  return out;
}

std::string_view bound_rule_name(BoundRule rule) {
  switch (rule) {
    case BoundRule::LowerProb: return "lower_prob";
    case BoundRule::UpperMean: return "upper_mean";
    case BoundRule::LowerMean: return "lower_mean";
  }
  return "?";
}

BoundReport compare_bounds(const ProtocolConfig& config, const TrialPlan& plan) {
  config.validate();
  require_trials(plan, 100, "compare_bounds");
  const SimulationSummary summary = simulate_protocol(config, plan);

  const double lambda = config.lambda.per_second();
  const double cap =
      config.uses_cap() ? config.delta_cap : std::numeric_limits<double>::quiet_NaN();

  double correct_bound = 0.0;
  double rt_bound = 0.0;
  BoundRule rt_rule = BoundRule::UpperMean;
  switch (config.kind) {
    case ProtocolKind::MessageChain:
      correct_bound = 1.0;
      rt_bound = (config.n - 1) / lambda;  // floor shared by every sorted-action protocol
      rt_rule = BoundRule::LowerMean;
      break;
    case ProtocolKind::Core:
      correct_bound = analytics::core_correct_lower_bound(config.n, lambda, config.delta_cap);
      rt_bound =
          analytics::core_ert_upper_bound(config.n, lambda, config.delta_cap) + config.epsilon;
      break;
    case ProtocolKind::CoreHybrid:
      correct_bound = analytics::core_correct_lower_bound(config.n, lambda, config.delta_cap);
      rt_bound = std::min(
          config.n / lambda,
          analytics::core_ert_upper_bound(config.n, lambda, config.delta_cap) + config.epsilon);
      break;
    case ProtocolKind::PaCore:
      correct_bound =
          analytics::pacore_correct_lower_bound(config.n, lambda, config.delta_cap);
      rt_bound = analytics::pacore_ert_upper_bound(config.n, lambda, config.delta_cap);
      break;
    case ProtocolKind::PaCoreHybrid:
      correct_bound =
          analytics::pacore_correct_lower_bound(config.n, lambda, config.delta_cap);
      rt_bound = std::min(
          (config.n + 1) / lambda,
          analytics::pacore_ert_upper_bound(config.n, lambda, config.delta_cap));
      break;
  }

  BoundReport report;
  const std::string base(protocol_name(config.kind));

  BoundRow correctness;
  correctness.name = base + "/correctness";
  correctness.n = config.n;
  correctness.lambda = lambda;
  correctness.delta = cap;
  correctness.trials = plan.trials;
  correctness.estimate = summary.correct_nonstrict;
  correctness.bound = correct_bound;
  correctness.rule = BoundRule::LowerProb;
  correctness.pass = bound_holds(correctness.estimate, correct_bound, correctness.rule);

  BoundRow response = correctness;
  response.name = base + "/response-time";
  response.estimate = summary.response_time;
  response.bound = rt_bound;
  response.rule = rt_rule;
  response.pass = bound_holds(response.estimate, rt_bound, rt_rule);

  report.all_pass = correctness.pass && response.pass;
  report.rows.push_back(std::move(correctness));
  report.rows.push_back(std::move(response));
  return report;
}

BoundReport sync_report(const SyncExperimentConfig& config, const SyncResult& result) {
  BoundReport report;
  const std::string base = "sync-" + std::string(sync_mode_name(config.mode));

  BoundRow pairwise;
  pairwise.name = base + "/pairwise";
  pairwise.n = config.n;
  pairwise.lambda = config.lambda.per_second();
  pairwise.delta = result.delta;
  pairwise.trials = result.pairwise.trials;
  pairwise.estimate = result.pairwise;
  pairwise.bound = result.floor;
  pairwise.rule = BoundRule::LowerProb;
  pairwise.pass = bound_holds(result.pairwise, result.floor, BoundRule::LowerProb);

  BoundRow individual = pairwise;
  individual.name = base + "/individual";
  individual.trials = result.individual.trials;
  individual.estimate = result.individual;
  individual.pass = bound_holds(result.individual, result.floor, BoundRule::LowerProb);

  report.all_pass = pairwise.pass && individual.pass;
  report.rows.push_back(std::move(pairwise));
  report.rows.push_back(std::move(individual));
  return report;
}

}  // namespace ordsim
