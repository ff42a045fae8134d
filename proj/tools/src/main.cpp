// ordsim: analytic calculator and Monte Carlo driver for ordered-response
// protocols under exponentially distributed message delays.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 at least one FAIL verdict
// in a bound comparison (compare, sync-experiment).

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordsim/analytics.hpp"
#include "ordsim/experiments.hpp"
#include "ordsim/report.hpp"

namespace {

// Every run is seeded. Without --seed and without ORDSIM_SEED in the
// environment, this constant is used, so repeated invocations agree.
constexpr std::uint64_t kDefaultSeed = 1729;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed) {
  if (cli_seed) return *cli_seed;
  if (const char* env = std::getenv("ORDSIM_SEED")) {
    std::string s(env);
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(s, &used, 10);
      if (used != s.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw UsageError("ORDSIM_SEED must be a base-10 unsigned integer, got \"" + s + "\"");
    }
  }
  return kDefaultSeed;
}

void check_unit_interval(const std::optional<double>& v, const char* flag) {
  if (v && !(*v > 0.0 && *v < 1.0)) {
    throw UsageError(std::string(flag) + " must lie strictly in (0,1)");
  }
}

// Shared flag bundle for the subcommands that build a ProtocolConfig.
struct ProtocolArgs {
  std::string protocol;
  int n = 2;
  double lambda = 1.0;
  std::optional<double> delta;
  std::optional<double> p;
  std::optional<double> one_minus_p;
  double epsilon = 0.0;

  void add_to(CLI::App& cmd, bool with_epsilon) {
    cmd.add_option("--protocol", protocol, "protocol to run")
        ->required()
        ->check(CLI::IsMember(
            {"message-chain", "core", "core-hybrid", "pacore", "pacore-hybrid"}));
    cmd.add_option("--n", n, "worker count parameter n (default 2)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--lambda", lambda,
                   "delay rate in 1/seconds (default 1)");
    cmd.add_option("--delta", delta, "wait cap in seconds (capped protocols)");
    cmd.add_option("--p", p,
                   "correctness target in (0,1); derives the cap via the "
                   "protocol family's inverse bound");
    cmd.add_option("--one-minus-p", one_minus_p,
                   "complement of the correctness target, for values near 1 "
                   "(e.g. 1e-9 means p = 1-1e-9)");
    if (with_epsilon) {
      cmd.add_option("--epsilon", epsilon,
                     "tie-breaking stagger in seconds for the capped-broadcast "
                     "protocols (default 0)");
    }
  }

  ordsim::ProtocolKind kind() const {
    const auto k = ordsim::parse_protocol(protocol);
    if (!k) throw UsageError("--protocol: unknown protocol \"" + protocol + "\"");
    return *k;
  }

  double resolve_cap(ordsim::ProtocolKind k) const {
    const int given = (delta ? 1 : 0) + (p ? 1 : 0) + (one_minus_p ? 1 : 0);
    if (k == ordsim::ProtocolKind::MessageChain) {
      if (given != 0) {
        throw UsageError("--delta/--p/--one-minus-p: message-chain takes no wait cap");
      }
      return 0.0;
    }
    if (given != 1) {
      throw UsageError(
          "exactly one of --delta, --p, --one-minus-p is required for this protocol");
    }
    if (delta) {
      if (!(*delta > 0.0)) throw UsageError("--delta must be > 0 seconds");
      return *delta;
    }
    check_unit_interval(p, "--p");
    check_unit_interval(one_minus_p, "--one-minus-p");
    const bool adjusted = (k == ordsim::ProtocolKind::PaCore ||
                           k == ordsim::ProtocolKind::PaCoreHybrid);
    if (p) {
      return adjusted ? ordsim::analytics::pacore_delta_for_p(n, lambda, *p)
                      : ordsim::analytics::core_delta_for_p(n, lambda, *p);
    }
    return adjusted
               ? ordsim::analytics::pacore_delta_for_p_complement(n, lambda, *one_minus_p)
               : ordsim::analytics::core_delta_for_p_complement(n, lambda, *one_minus_p);
  }

  ordsim::ProtocolConfig config() const {
    ordsim::ProtocolConfig cfg;
    cfg.kind = kind();
    cfg.n = n;
    cfg.lambda = ordsim::Rate(lambda);
    cfg.delta_cap = resolve_cap(cfg.kind);
    cfg.epsilon = epsilon;
    return cfg;
  }
};

struct DelayArgs {
  std::optional<double> constant;
  std::string scripted;

  void add_to(CLI::App& cmd) {
    auto* c = cmd.add_option("--constant-delay", constant,
                             "replace random delays with this constant, in seconds");
    auto* s = cmd.add_option(
        "--scripted-delays", scripted,
        "comma-separated delays in seconds, consumed in send order");
    c->excludes(s);
  }

  std::optional<ordsim::DelaySource> source() const {
    if (constant) {
      if (!(*constant >= 0.0)) throw UsageError("--constant-delay must be >= 0");
      return ordsim::DelaySource::constant(*constant);
    }
    if (!scripted.empty()) {
      std::vector<double> values;
      std::stringstream ss(scripted);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          values.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
          throw UsageError("--scripted-delays: \"" + item + "\" is not a number");
        }
      }
      if (values.empty()) throw UsageError("--scripted-delays: empty list");
      return ordsim::DelaySource::scripted(values);
    }
    return std::nullopt;
  }
};

ordsim::ClockOffsetScheme parse_offsets(const std::string& text) {
  if (text.empty() || text == "zero") return ordsim::ClockOffsetScheme::zero();
  if (text.rfind("uniform:", 0) == 0) {
    try {
      const double hw = std::stod(text.substr(8));
      return ordsim::ClockOffsetScheme::uniform(hw);
    } catch (const std::exception&) {
      throw UsageError("--offsets: uniform needs a numeric half width, e.g. uniform:50");
    }
  }
  if (text.rfind("fixed:", 0) == 0) {
    std::vector<double> vals;
    std::stringstream ss(text.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        vals.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw UsageError("--offsets: fixed list entry \"" + item + "\" is not a number");
      }
    }
    if (vals.empty()) throw UsageError("--offsets: fixed needs a comma-separated list");
    return ordsim::ClockOffsetScheme::fixed_offsets(vals);
  }
  throw UsageError("--offsets must be zero, uniform:<half-width>, or fixed:<a,b,...>");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write output file \"" + path + "\"");
}

std::string fmt_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int run_analytic(const std::string& formula, const ProtocolArgs& args) {
  using namespace ordsim::analytics;
  const int n = args.n;
  const double lambda = args.lambda;
  check_unit_interval(args.p, "--p");
  check_unit_interval(args.one_minus_p, "--one-minus-p");

  auto need_delta = [&]() -> double {
    if (!args.delta) throw UsageError("--delta is required for this formula");
    if (!(*args.delta > 0.0)) throw UsageError("--delta must be > 0 seconds");
    return *args.delta;
  };
  auto need_p = [&](double (*direct)(int, double, double),
                    double (*complement)(int, double, double)) -> double {
    if (args.p && args.one_minus_p) {
      throw UsageError("give either --p or --one-minus-p, not both");
    }
    if (args.p) return direct(n, lambda, *args.p);
    if (args.one_minus_p) return complement(n, lambda, *args.one_minus_p);
    throw UsageError("--p or --one-minus-p is required for this formula");
  };

  double value = 0.0;
  if (formula == "core-correct") {
    value = core_correct_probability(n, lambda, need_delta());
  } else if (formula == "core-lower-bound") {
    value = core_correct_lower_bound(n, lambda, need_delta());
  } else if (formula == "core-delta") {
    value = need_p(&core_delta_for_p, &core_delta_for_p_complement);
  } else if (formula == "core-ert") {
    value = core_ert_upper_bound(n, lambda, need_delta());
  } else if (formula == "pacore-lower-bound") {
    value = pacore_correct_lower_bound(n, lambda, need_delta());
  } else if (formula == "pacore-delta") {
    value = need_p(&pacore_delta_for_p, &pacore_delta_for_p_complement);
  } else if (formula == "pacore-ert") {
    value = pacore_ert_upper_bound(n, lambda, need_delta());
  } else if (formula == "psi") {
    value = psi(n);
  } else if (formula == "delta-sync") {
    value = delta_sync(n, lambda);
  } else if (formula == "harmonic") {
    value = harmonic(n);
  } else {
    throw UsageError("--formula: unknown formula \"" + formula + "\"");
  }
  std::printf("%s\n", fmt_full(value).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ordsim: ordered-response protocols under exponential message delays.\n"
      "Analytic bounds and deterministic Monte Carlo, seeded by --seed\n"
      "(default 1729; environment ORDSIM_SEED overrides the default,\n"
      "--seed overrides both). Times are seconds, rates are 1/seconds."};
  app.require_subcommand(1);

  // analytic ---------------------------------------------------------------
  auto* analytic = app.add_subcommand(
      "analytic", "evaluate one closed-form quantity and print it");
  std::string formula;
  ProtocolArgs an_args;
  analytic
      ->add_option("--formula", formula,
                   "one of core-correct, core-lower-bound, core-delta, core-ert, "
                   "pacore-lower-bound, pacore-delta, pacore-ert, psi, delta-sync, "
                   "harmonic")
      ->required();
  analytic->add_option("--n", an_args.n, "agent count n (default 2)")
      ->check(CLI::PositiveNumber);
  analytic->add_option("--lambda", an_args.lambda, "delay rate in 1/seconds (default 1)");
  analytic->add_option("--delta", an_args.delta, "wait cap in seconds");
  analytic->add_option("--p", an_args.p, "correctness target in (0,1)");
  analytic->add_option("--one-minus-p", an_args.one_minus_p,
                       "complement of the correctness target, for values near 1");

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "run Monte Carlo trials of one protocol and summarize");
  ProtocolArgs sim_args;
  sim_args.add_to(*simulate, /*with_epsilon=*/true);
  DelayArgs sim_delay;
  sim_delay.add_to(*simulate);
  std::string offsets_text;
  simulate->add_option(
      "--offsets", offsets_text,
      "local clock offsets for the adjusted-clock protocols: zero (default), "
      "uniform:<half-width seconds>, or fixed:<a,b,...> seconds");
  std::uint64_t sim_trials = 1000;
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials (default 1000)")
      ->check(CLI::PositiveNumber);
  std::optional<std::uint64_t> sim_seed;
  simulate->add_option("--seed", sim_seed, "master seed (default 1729 or ORDSIM_SEED)");
  unsigned sim_workers = 0;
  simulate->add_option(
      "--workers", sim_workers,
      "worker threads, 0 = hardware count (default 0); never changes results");
  bool trace = false;
  simulate->add_flag("--trace", trace,
                     "print the delivery trace (tab-separated fire_time/target/tag) "
                     "instead of a summary; requires --trials 1");
  bool dump_runs = false;
  simulate->add_flag("--dump-runs", dump_runs,
                     "print one flat JSON record per trial instead of a summary");
  std::string sim_output, sim_format = "csv";
  simulate->add_option("--output", sim_output, "write to this path instead of stdout");
  simulate->add_option("--format", sim_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  // compare ----------------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare", "simulate one protocol and check its analytic bounds "
                 "(exit 2 if any verdict is FAIL)");
  ProtocolArgs cmp_args;
  cmp_args.add_to(*compare, /*with_epsilon=*/true);
  DelayArgs cmp_delay;
  cmp_delay.add_to(*compare);
  std::uint64_t cmp_trials = 10000;
  compare->add_option("--trials", cmp_trials, "Monte Carlo trials (default 10000)")
      ->check(CLI::PositiveNumber);
  std::optional<std::uint64_t> cmp_seed;
  compare->add_option("--seed", cmp_seed, "master seed (default 1729 or ORDSIM_SEED)");
  unsigned cmp_workers = 0;
  compare->add_option(
      "--workers", cmp_workers,
      "worker threads, 0 = hardware count (default 0); never changes results");
  std::string cmp_output, cmp_format = "csv";
  compare->add_option("--output", cmp_output, "write to this path instead of stdout");
  compare->add_option("--format", cmp_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  // cutoff -----------------------------------------------------------------
  auto* cutoff = app.add_subcommand(
      "cutoff", "smallest n whose optimal capped broadcast beats the chain's "
                "expected response time at the given correctness target");
  std::vector<double> cutoff_ps, cutoff_qs;
  cutoff->add_option("--p", cutoff_ps, "correctness target in (0,1); repeatable");
  cutoff->add_option("--one-minus-p", cutoff_qs,
                     "complement form for targets near 1 (e.g. 1e-9); repeatable");
  std::string cut_output, cut_format = "csv";
  cutoff->add_option("--output", cut_output, "write to this path instead of stdout");
  cutoff->add_option("--format", cut_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  // sync-experiment ----------------------------------------------------------
  auto* sync = app.add_subcommand(
      "sync-experiment",
      "sample the clock-agreement hypothesis vector and report how often it "
      "lands within the synchronization window (exit 2 if below the bound)");
  int sync_n = 2;
  sync->add_option("--n", sync_n, "agent count n >= 2 (default 2)")
      ->check(CLI::PositiveNumber);
  double sync_lambda = 1.0;
  sync->add_option("--lambda", sync_lambda, "delay rate in 1/seconds (default 1)");
  std::string sync_mode = "independent";
  sync->add_option("--mode", sync_mode,
                   "independent (fresh draws per agent, default) or correlated "
                   "(shared trigger legs)")
      ->check(CLI::IsMember({"independent", "correlated"}));
  std::uint64_t sync_trials = 1000;
  sync->add_option("--trials", sync_trials, "Monte Carlo trials (default 1000)")
      ->check(CLI::PositiveNumber);
  std::optional<std::uint64_t> sync_seed;
  sync->add_option("--seed", sync_seed, "master seed (default 1729 or ORDSIM_SEED)");
  unsigned sync_workers = 0;
  sync->add_option(
      "--workers", sync_workers,
      "worker threads, 0 = hardware count (default 0); never changes results");
  DelayArgs sync_delay;
  sync_delay.add_to(*sync);
  std::string sync_output, sync_format = "csv";
  sync->add_option("--output", sync_output, "write to this path instead of stdout");
  sync->add_option("--format", sync_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "echo the resolved configuration to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*analytic) {
      return run_analytic(formula, an_args);
    }

    if (*simulate) {
      ordsim::ProtocolConfig cfg = sim_args.config();
      cfg.offsets = parse_offsets(offsets_text);
      cfg.delay = sim_delay.source();
      cfg.validate();
      if (cfg.uses_adjusted_clocks() && cfg.n < 2) {
        std::fprintf(stderr,
                     "note: the adjusted-clock analytic bounds need n >= 2; "
                     "simulation proceeds, bounds are unavailable\n");
      }
      const ordsim::TrialPlan plan{resolve_seed(sim_seed), sim_trials, sim_workers};
      if (verbosity > 0) {
        std::fprintf(stderr, "seed=%" PRIu64 " trials=%" PRIu64 " workers=%u\n",
                     plan.master_seed, plan.trials, plan.workers);
      }
      if (trace && dump_runs) throw UsageError("--trace and --dump-runs are exclusive");
      if (trace) {
        if (sim_trials != 1) throw UsageError("--trace requires --trials 1");
        const auto traced =
            ordsim::run_protocol_traced(cfg, ordsim::split_stream(plan.master_seed, 0));
        write_output(ordsim::format_trace(traced.trace), sim_output);
        return 0;
      }
      if (dump_runs) {
        const auto records = ordsim::run_trials<ordsim::RunRecord>(
            plan, [&cfg](std::uint64_t, const ordsim::RngStream& s) {
              return ordsim::run_protocol(cfg, s);
            });
        std::string out;
        for (std::size_t i = 0; i < records.size(); ++i) {
          out += ordsim::run_record_json(cfg, plan.master_seed, i, records[i]);
          out += '\n';
        }
        write_output(out, sim_output);
        return 0;
      }
      const auto summary = ordsim::simulate_protocol(cfg, plan);
      const auto lines = ordsim::summary_lines(cfg, plan.trials, summary);
      write_output(sim_format == "json" ? ordsim::report_json(lines)
                                        : ordsim::report_csv(lines),
                   sim_output);
      return 0;
    }

    if (*compare) {
      ordsim::ProtocolConfig cfg = cmp_args.config();
      cfg.delay = cmp_delay.source();
      const ordsim::TrialPlan plan{resolve_seed(cmp_seed), cmp_trials, cmp_workers};
      if (verbosity > 0) {
        std::fprintf(stderr, "seed=%" PRIu64 " trials=%" PRIu64 " workers=%u\n",
                     plan.master_seed, plan.trials, plan.workers);
      }
      const auto report = ordsim::compare_bounds(cfg, plan);
      const auto lines = ordsim::to_lines(report);
      write_output(cmp_format == "json" ? ordsim::report_json(lines)
                                        : ordsim::report_csv(lines),
                   cmp_output);
      return report.all_pass ? 0 : 2;
    }

    if (*cutoff) {
      if (cutoff_ps.empty() && cutoff_qs.empty()) {
        throw UsageError("cutoff needs at least one --p or --one-minus-p value");
      }
      auto points = ordsim::cutoff_curve(cutoff_ps);
      for (double q : cutoff_qs) {
        if (!(q > 0.0 && q < 1.0)) {
          throw UsageError("--one-minus-p must lie strictly in (0,1)");
        }
        points.push_back(
            ordsim::CutoffPoint{q, ordsim::analytics::cutoff_n_complement(q)});
      }
      write_output(cut_format == "json" ? ordsim::cutoff_json(points)
                                        : ordsim::cutoff_csv(points),
                   cut_output);
      return 0;
    }

    if (*sync) {
      ordsim::SyncExperimentConfig cfg;
      cfg.n = sync_n;
      cfg.lambda = ordsim::Rate(sync_lambda);
      cfg.mode = sync_mode == "correlated" ? ordsim::SyncMode::Correlated
                                           : ordsim::SyncMode::Independent;
      cfg.delay = sync_delay.source();
      const ordsim::TrialPlan plan{resolve_seed(sync_seed), sync_trials, sync_workers};
      if (verbosity > 0) {
        std::fprintf(stderr, "seed=%" PRIu64 " trials=%" PRIu64 " workers=%u\n",
                     plan.master_seed, plan.trials, plan.workers);
      }
      const auto result = ordsim::sync_probability_experiment(cfg, plan);
      const auto report = ordsim::sync_report(cfg, result);
      const auto lines = ordsim::to_lines(report);
      write_output(sync_format == "json" ? ordsim::report_json(lines)
                                         : ordsim::report_csv(lines),
                   sync_output);
      return report.all_pass ? 0 : 2;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
