#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordsim/delay_source.hpp"
#include "ordsim/event_loop.hpp"
#include "ordsim/rng.hpp"
#include "ordsim/time.hpp"

namespace ordsim {

enum class ProtocolKind { MessageChain, Core, CoreHybrid, PaCore, PaCoreHybrid };

[[nodiscard]] std::string_view protocol_name(ProtocolKind kind);
[[nodiscard]] std::optional<ProtocolKind> parse_protocol(std::string_view name);

// Initial worker clock offsets. Only the adjusted-clock protocols read local
// clocks; the global-clock protocols must be configured with Zero.
// The supervisor's clock is never offset.
struct ClockOffsetScheme {
  enum class Mode { Zero, Fixed, UniformRandom };

  Mode mode = Mode::Zero;
  std::vector<double> fixed;  // Fixed: one offset per worker, seconds
  double half_width = 0.0;    // UniformRandom: offsets uniform on [-hw, +hw]

  static ClockOffsetScheme zero() { return {}; }
  static ClockOffsetScheme fixed_offsets(std::vector<double> offsets) {
    return {Mode::Fixed, std::move(offsets), 0.0};
  }
  static ClockOffsetScheme uniform(double half_width) {
    return {Mode::UniformRandom, {}, half_width};
  }
};

// Everything needed to reproduce one run given a seed.
struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Core;
  // Size parameter. The chain and capped-broadcast protocols run n workers;
  // the rebroadcast protocols run n+1. One supervisor on top of either.
  int n = 1;
  Rate lambda{1.0};
  double delta_cap = 0.0;  // seconds; must be > 0 for the capped protocols
  double epsilon = 0.0;    // strict-ordering stagger, seconds; 0 disables it
  ClockOffsetScheme offsets;
  // Message delay generator; defaults to Exponential(lambda).
  std::optional<DelaySource> delay;

  [[nodiscard]] int worker_count() const;
  [[nodiscard]] bool uses_cap() const;
  [[nodiscard]] bool uses_adjusted_clocks() const;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Full outcome of one simulated run. All times sit on the global axis.
struct RunRecord {
  std::vector<double> action_times;  // worker order i_1..i_w, seconds
  double response_time = 0.0;        // max of action_times
  std::int64_t messages_sent = 0;    // every send counts, dropped deliveries included
  bool correct_nonstrict = false;    // t_1 <= t_2 <= ... <= t_w
  bool correct_strict = false;       // strict <

  // Adjusted-clock protocols only. adjustments[k] is worker k+1's clock
  // adjustment hypothesis mapped to the global axis (its local hypothesis
  // minus its own starting offset), so the values are comparable across
  // workers and invariant under offset schemes.
  std::optional<std::vector<double>> adjustments;
  // max(adjustments) - min(adjustments) <= 2 * delta_sync(n, lambda)
  std::optional<bool> delta_synchronized;
  // Max over workers of the arrival time of their last composite message,
  // read on that worker's adjusted clock. Together with delta_synchronized
  // this makes the guaranteed-correctness condition checkable per run.
  std::optional<double> adjusted_arrival_max;
};

struct Classification {
  bool nonstrict;
  bool strict;
};
[[nodiscard]] Classification classify_run(const std::vector<double>& action_times);

// One protocol run with every random draw taken from `stream`. Delay draws
// come from stream.derive(0) and offset draws (UniformRandom scheme) from
// stream.derive(1), so the sampled delays do not depend on the offset scheme.
[[nodiscard]] RunRecord run_protocol(const ProtocolConfig& config, const RngStream& stream);

struct TracedRun {
  RunRecord record;
  std::vector<TraceEntry> trace;
};
[[nodiscard]] TracedRun run_protocol_traced(const ProtocolConfig& config,
                                            const RngStream& stream);

// Per-kind entry points; each checks the config carries its kind.
[[nodiscard]] RunRecord run_message_chain(const ProtocolConfig& config, const RngStream& stream);
[[nodiscard]] RunRecord run_core(const ProtocolConfig& config, const RngStream& stream);
[[nodiscard]] RunRecord run_core_hybrid(const ProtocolConfig& config, const RngStream& stream);
[[nodiscard]] RunRecord run_pacore(const ProtocolConfig& config, const RngStream& stream);
[[nodiscard]] RunRecord run_pacore_hybrid(const ProtocolConfig& config, const RngStream& stream);

// One-line flat JSON object for the CLI run dump; field names are part of the
// CLI contract and documented in the README.
[[nodiscard]] std::string run_record_json(const ProtocolConfig& config,
                                          std::uint64_t master_seed, std::uint64_t trial,
                                          const RunRecord& record);

}  // namespace ordsim
