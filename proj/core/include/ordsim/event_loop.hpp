#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordsim/time.hpp"

namespace ordsim {

using AgentId = int;

// A handler tried to schedule an event behind the current simulation time.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <typename Payload>
struct Event {
  SimTime at;
  std::uint64_t tiebreak_seq;  // insertion order, breaks equal fire times
  AgentId target;
  Payload payload;
};

struct TraceEntry {
  SimTime at;
  AgentId target;
  std::string tag;
};

// One line per event, tab separated: fire time with nine decimal places,
// target agent id, payload tag. Line order equals processing order.
[[nodiscard]] inline std::string format_trace(const std::vector<TraceEntry>& trace) {
  std::string out;
  char buf[64];
  for (const TraceEntry& e : trace) {
    std::snprintf(buf, sizeof buf, "%.9f\t%d\t", e.at.seconds(), e.target);
    out += buf;
    out += e.tag;
    out += '\n';
  }
  return out;
}

namespace detail {
template <typename P>
std::string_view event_tag(const P& payload) {
  if constexpr (requires { { payload.tag() } -> std::convertible_to<std::string_view>; }) {
    return payload.tag();
  } else {
    return "event";
  }
}
}  // namespace detail

// Discrete event loop. Events fire in (fire_time, tiebreak_seq) lexicographic
// order; the sequence number increases with every insertion, so ties between
// equal fire times resolve to insertion order. Scheduling behind the current
// time is a hard error: no protocol here needs retroactive events, so any
// attempt is a causality bug worth failing loudly on.
template <typename Payload>
class EventLoop {
 public:
  void schedule(SimTime at, AgentId target, Payload payload) {
    if (at < now_) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "event scheduled at t=%.12g behind current time t=%.12g",
                    at.seconds(), now_.seconds());
      throw CausalityError(buf);
    }
    heap_.push_back(Node{at, next_seq_++, target, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), fires_later);
  }

  // Drains the queue, invoking handler(const Event<Payload>&) for each event
  // in firing order. The handler may call schedule() for future events.
  template <typename Handler>
  void run(Handler&& handler) {
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), fires_later);
      Node node = std::move(heap_.back());
      heap_.pop_back();
      now_ = node.at;
      if (tracing_) {
        trace_.push_back(TraceEntry{node.at, node.target,
                                    std::string(detail::event_tag(node.payload))});
      }
      handler(Event<Payload>{node.at, node.seq, node.target, std::move(node.payload)});
    }
  }

  [[nodiscard]] SimTime now() const { return now_; }
  [[nodiscard]] bool empty() const { return heap_.empty(); }

  void enable_trace(bool on) { tracing_ = on; }
  [[nodiscard]] const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  struct Node {
    SimTime at;
    std::uint64_t seq;
    AgentId target;
    Payload payload;
  };

  // Max-heap comparator inverted into a min-heap on (time, seq).
  static bool fires_later(const Node& a, const Node& b) {
    if (a.at != b.at) return b.at < a.at;
    return b.seq < a.seq;
  }

  std::vector<Node> heap_;
  std::uint64_t next_seq_ = 0;
  SimTime now_{};
  bool tracing_ = false;
  std::vector<TraceEntry> trace_;
};

}  // namespace ordsim
