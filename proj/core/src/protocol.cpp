#include "ordsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ordsim/analytics.hpp"

namespace ordsim {

std::string_view protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::MessageChain: return "message-chain";
    case ProtocolKind::Core: return "core";
    case ProtocolKind::CoreHybrid: return "core-hybrid";
    case ProtocolKind::PaCore: return "pacore";
    case ProtocolKind::PaCoreHybrid: return "pacore-hybrid";
  }
  throw std::logic_error("protocol_name: unreachable");
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  if (name == "message-chain") return ProtocolKind::MessageChain;
  if (name == "core") return ProtocolKind::Core;
  if (name == "core-hybrid") return ProtocolKind::CoreHybrid;
  if (name == "pacore") return ProtocolKind::PaCore;
  if (name == "pacore-hybrid") return ProtocolKind::PaCoreHybrid;
  return std::nullopt;
}

int ProtocolConfig::worker_count() const {
  return uses_adjusted_clocks() ? n + 1 : n;
}

bool ProtocolConfig::uses_cap() const { return kind != ProtocolKind::MessageChain; }

bool ProtocolConfig::uses_adjusted_clocks() const {
  return kind == ProtocolKind::PaCore || kind == ProtocolKind::PaCoreHybrid;
}

void ProtocolConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ProtocolConfig: n must be >= 1");
  if (uses_cap() && !(delta_cap > 0.0)) {
    throw std::invalid_argument(
        "ProtocolConfig: delta_cap must be > 0 seconds for this protocol");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("ProtocolConfig: epsilon must be >= 0");
  }
  if (epsilon > 0.0 && kind != ProtocolKind::Core && kind != ProtocolKind::CoreHybrid) {
    throw std::invalid_argument(
        "ProtocolConfig: epsilon applies only to the capped-broadcast protocols");
  }
  if (!uses_adjusted_clocks() && offsets.mode != ClockOffsetScheme::Mode::Zero) {
    throw std::invalid_argument(
        "ProtocolConfig: offsets apply only to the adjusted-clock protocols");
  }
  if (offsets.mode == ClockOffsetScheme::Mode::Fixed &&
      offsets.fixed.size() != static_cast<std::size_t>(worker_count())) {
    throw std::invalid_argument(
        "ProtocolConfig: Fixed offsets need exactly one entry per worker");
  }
  if (offsets.mode == ClockOffsetScheme::Mode::UniformRandom && !(offsets.half_width >= 0.0)) {
    throw std::invalid_argument("ProtocolConfig: offset half width must be >= 0");
  }
}

Classification classify_run(const std::vector<double>& action_times) {
  Classification out{true, true};
  for (double t : action_times) {
    if (!std::isfinite(t)) {
      throw std::invalid_argument("classify_run: action times must be finite");
    }
  }
  for (std::size_t i = 1; i < action_times.size(); ++i) {
    if (!(action_times[i - 1] <= action_times[i])) out.nonstrict = false;
    if (!(action_times[i - 1] < action_times[i])) out.strict = false;
  }
  return out;
}

namespace {

enum class MsgKind : std::uint8_t { Trigger, Redirect, Act, Chain, Timer };

struct Msg {
  MsgKind kind;

  [[nodiscard]] std::string_view tag() const {
    switch (kind) {
      case MsgKind::Trigger: return "trigger";
      case MsgKind::Redirect: return "redirect";
      case MsgKind::Act: return "act";
      case MsgKind::Chain: return "chain";
      case MsgKind::Timer: return "timer";
    }
    return "?";
  }
};

struct AgentState {
  bool acted = false;
  double action_time = 0.0;
  int composites_seen = 0;
  double tau_sum = 0.0;  // local-clock readings of composite arrivals
  bool hypothesis_set = false;
  double hypothesis_global = 0.0;       // local T minus own offset
  double last_composite_arrival = 0.0;  // global axis
};

class Engine {
 public:
  Engine(const ProtocolConfig& cfg, const RngStream& stream)
      : cfg_(cfg),
        delay_(cfg.delay ? *cfg.delay : DelaySource::exponential(cfg.lambda)),
        delay_rng_(stream.derive(0)),
        offset_rng_(stream.derive(1)),
        w_(cfg.worker_count()),
        agents_(static_cast<std::size_t>(w_) + 1),
        offsets_(static_cast<std::size_t>(w_) + 1, 0.0) {
    if (cfg_.uses_adjusted_clocks()) {
      stagger_unit_ = analytics::delta_sync(cfg_.n, cfg_.lambda.per_second());
    }
    switch (cfg_.offsets.mode) {
      case ClockOffsetScheme::Mode::Zero:
        break;
      case ClockOffsetScheme::Mode::Fixed:
        for (int k = 1; k <= w_; ++k) offsets_[k] = cfg_.offsets.fixed[k - 1];
        break;
      case ClockOffsetScheme::Mode::UniformRandom:
        for (int k = 1; k <= w_; ++k) {
          offsets_[k] = offset_rng_.uniform(-cfg_.offsets.half_width,
                                            cfg_.offsets.half_width);
        }
        break;
    }
  }

  RunRecord run(std::vector<TraceEntry>* trace_out) {
    loop_.enable_trace(trace_out != nullptr);
    start();
    loop_.run([this](const Event<Msg>& event) { handle(event); });
    if (trace_out != nullptr) *trace_out = loop_.trace();
    return assemble();
  }

 private:
  bool has_chain() const {
    return cfg_.kind == ProtocolKind::MessageChain ||
           cfg_.kind == ProtocolKind::CoreHybrid ||
           cfg_.kind == ProtocolKind::PaCoreHybrid;
  }

  // The external input hits the supervisor at t = 0. Broadcast sends go out in
  // worker order, then the chain-head "act" message; this fixed draw order is
  // what makes scripted delay lists meaningful.
  void start() {
    if (cfg_.kind != ProtocolKind::MessageChain) {
      for (int k = 1; k <= w_; ++k) send(k, MsgKind::Trigger);
    }
    if (has_chain()) send(1, MsgKind::Act);
  }

  void handle(const Event<Msg>& event) {
    const int k = event.target;
    const double now = event.at.seconds();
    switch (event.payload.kind) {
      case MsgKind::Trigger:
        on_trigger(k, now);
        break;
      case MsgKind::Redirect:
        on_composite(k, now);
        break;
      case MsgKind::Act:
      case MsgKind::Chain:
        on_chain(k, now);
        break;
      case MsgKind::Timer:
        if (!agents_[k].acted) act(k, now, /*via_chain=*/false);
        break;
    }
  }

  void on_trigger(int k, double now) {
    if (cfg_.uses_adjusted_clocks()) {
      // Rebroadcast unconditionally: coworkers wait for exactly n composites,
      // so even an agent that already acted must keep phase 1 alive.
      for (int j = 1; j <= w_; ++j) {
        if (j != k) send(j, MsgKind::Redirect);
      }
      return;
    }
    if (agents_[k].acted) return;  // chain already fired; trigger is moot
    const double target = cfg_.delta_cap + epsilon_stagger(k);
    if (now >= target) {
      act(k, now, /*via_chain=*/false);  // late trigger: act immediately
    } else {
      loop_.schedule(SimTime(target), k, Msg{MsgKind::Timer});
    }
  }

  // Trigger+redirect composite arrival during the clock-agreement phase.
  void on_composite(int k, double now) {
    AgentState& a = agents_[k];
    a.composites_seen += 1;
    a.tau_sum += now + offsets_[k];  // read on the local clock
    if (a.composites_seen != cfg_.n) return;

    const double local_hypothesis =
        a.tau_sum / cfg_.n - 2.0 / cfg_.lambda.per_second();
    a.hypothesis_global = local_hypothesis - offsets_[k];
    a.hypothesis_set = true;
    a.last_composite_arrival = now;
    if (a.acted) return;  // hybrid chain got here first; hypothesis still recorded

    // Act when the adjusted clock reaches the staggered target, i.e. at
    // global time target + hypothesis; immediately if that is already past.
    const double target =
        cfg_.delta_cap + 2.0 * stagger_unit_ * (k - 1) + a.hypothesis_global;
    if (now >= target) {
      act(k, now, /*via_chain=*/false);
    } else {
      loop_.schedule(SimTime(target), k, Msg{MsgKind::Timer});
    }
  }

  void on_chain(int k, double now) {
    if (agents_[k].acted) return;  // chain dies at terminated agents
    act(k, now, /*via_chain=*/true);
  }

  void act(int k, double t, bool via_chain) {
    AgentState& a = agents_[k];
    if (a.acted) throw std::logic_error("protocol bug: agent acted twice");
    a.acted = true;
    a.action_time = t;
    if (via_chain && k < w_) send(k + 1, MsgKind::Chain);
  }

  void send(int to, MsgKind kind) {
    messages_ += 1;
    const double delay = delay_.sample(delay_rng_);
    loop_.schedule(loop_.now().advanced_by(delay), to, Msg{kind});
  }

  double epsilon_stagger(int k) const {
    return cfg_.epsilon > 0.0 ? cfg_.epsilon * (1.0 - std::exp2(-k)) : 0.0;
  }

  RunRecord assemble() {
    RunRecord rec;
    rec.action_times.reserve(w_);
    for (int k = 1; k <= w_; ++k) {
      if (!agents_[k].acted) {
        throw std::logic_error("protocol bug: agent never acted despite finite delays");
      }
      rec.action_times.push_back(agents_[k].action_time);
    }
    rec.response_time = *std::max_element(rec.action_times.begin(), rec.action_times.end());
    rec.messages_sent = messages_;
    const Classification cls = classify_run(rec.action_times);
    rec.correct_nonstrict = cls.nonstrict;
    rec.correct_strict = cls.strict;

    if (cfg_.uses_adjusted_clocks()) {
      std::vector<double> adjustments;
      adjustments.reserve(w_);
      double spread_lo = 0.0, spread_hi = 0.0, arrival_max = 0.0;
      for (int k = 1; k <= w_; ++k) {
        const AgentState& a = agents_[k];
        if (!a.hypothesis_set) {
          throw std::logic_error("protocol bug: clock-agreement phase incomplete");
        }
        adjustments.push_back(a.hypothesis_global);
        const double adjusted_arrival = a.last_composite_arrival - a.hypothesis_global;
        if (k == 1) {
          spread_lo = spread_hi = a.hypothesis_global;
          arrival_max = adjusted_arrival;
        } else {
          spread_lo = std::min(spread_lo, a.hypothesis_global);
          spread_hi = std::max(spread_hi, a.hypothesis_global);
          arrival_max = std::max(arrival_max, adjusted_arrival);
        }
      }
      rec.adjustments = std::move(adjustments);
      rec.delta_synchronized = (spread_hi - spread_lo) <= 2.0 * stagger_unit_;
      rec.adjusted_arrival_max = arrival_max;
    }
    return rec;
  }

  const ProtocolConfig& cfg_;
  DelaySource delay_;
  RngStream delay_rng_;
  RngStream offset_rng_;
  int w_;
  double stagger_unit_ = 0.0;
  std::vector<AgentState> agents_;  // 1-based, [0] unused (supervisor acts never)
  std::vector<double> offsets_;     // 1-based worker offsets; supervisor is 0
  std::int64_t messages_ = 0;
  EventLoop<Msg> loop_;
};

RunRecord run_checked(const ProtocolConfig& config, const RngStream& stream,
                      ProtocolKind expected) {
  if (config.kind != expected) {
    throw std::invalid_argument("run entry point called with mismatched protocol kind");
  }
  return run_protocol(config, stream);
}

}  // namespace

RunRecord run_protocol(const ProtocolConfig& config, const RngStream& stream) {
  config.validate();
  return Engine(config, stream).run(nullptr);
}

TracedRun run_protocol_traced(const ProtocolConfig& config, const RngStream& stream) {
  config.validate();
  TracedRun out;
  out.record = Engine(config, stream).run(&out.trace);
  return out;
}

RunRecord run_message_chain(const ProtocolConfig& config, const RngStream& stream) {
  return run_checked(config, stream, ProtocolKind::MessageChain);
}
RunRecord run_core(const ProtocolConfig& config, const RngStream& stream) {
  return run_checked(config, stream, ProtocolKind::Core);
}
RunRecord run_core_hybrid(const ProtocolConfig& config, const RngStream& stream) {
  return run_checked(config, stream, ProtocolKind::CoreHybrid);
}
RunRecord run_pacore(const ProtocolConfig& config, const RngStream& stream) {
  return run_checked(config, stream, ProtocolKind::PaCore);
}
RunRecord run_pacore_hybrid(const ProtocolConfig& config, const RngStream& stream) {
  return run_checked(config, stream, ProtocolKind::PaCoreHybrid);
}

std::string run_record_json(const ProtocolConfig& config, std::uint64_t master_seed,
                            std::uint64_t trial, const RunRecord& record) {
  nlohmann::ordered_json j;
  j["protocol"] = std::string(protocol_name(config.kind));
  j["n"] = config.n;
  j["workers"] = config.worker_count();
  j["lambda"] = config.lambda.per_second();
  if (config.uses_cap()) {
    j["delta"] = config.delta_cap;
  } else {
    j["delta"] = nullptr;
  }
  j["epsilon"] = config.epsilon;
  j["seed"] = master_seed;
  j["trial"] = trial;
  j["action_times"] = record.action_times;
  j["response_time"] = record.response_time;
  j["messages_sent"] = record.messages_sent;
  j["correct_nonstrict"] = record.correct_nonstrict;
  j["correct_strict"] = record.correct_strict;
  if (record.adjustments) j["adjustments"] = *record.adjustments;
  if (record.delta_synchronized) j["delta_synchronized"] = *record.delta_synchronized;
  if (record.adjusted_arrival_max) j["adjusted_arrival_max"] = *record.adjusted_arrival_max;
  return j.dump();
}

}  // namespace ordsim
