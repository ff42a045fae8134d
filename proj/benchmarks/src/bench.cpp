#include <benchmark/benchmark.h>

#include <cstdint>

#include "ordsim/analytics.hpp"
#include "ordsim/event_loop.hpp"
#include "ordsim/protocol.hpp"

namespace {

using namespace ordsim;

ProtocolConfig proto(ProtocolKind kind, int n, double delta = 0.0) {
  ProtocolConfig cfg;
  cfg.kind = kind;
  cfg.n = n;
  cfg.delta_cap = delta;
  return cfg;
}

struct Tick {
  int hops_left = 0;
};

// Raw queue throughput: one self-rescheduling event, measured per hop.
void BM_EventLoopHops(benchmark::State& state) {
  const auto hops = static_cast<int>(state.range(0));
  for (auto _ : state) {
    EventLoop<Tick> loop;
    loop.schedule(SimTime(0.0), 0, Tick{hops});
    loop.run([&loop](const Event<Tick>& ev) {
      if (ev.payload.hops_left > 0) {
        loop.schedule(loop.now().advanced_by(1e-6), ev.target,
                      Tick{ev.payload.hops_left - 1});
      }
    });
    benchmark::DoNotOptimize(loop.now());
  }
  state.SetItemsProcessed(state.iterations() * (hops + 1));
}
BENCHMARK(BM_EventLoopHops)->Arg(1000)->Arg(100000);

void BM_RunChain(benchmark::State& state) {
  const ProtocolConfig cfg = proto(ProtocolKind::MessageChain, static_cast<int>(state.range(0)));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(cfg, split_stream(1, trial++)));
  }
}
BENCHMARK(BM_RunChain)->Arg(50);

void BM_RunCore(benchmark::State& state) {
  const ProtocolConfig cfg =
      proto(ProtocolKind::Core, static_cast<int>(state.range(0)), 11.502);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(cfg, split_stream(1, trial++)));
  }
}
BENCHMARK(BM_RunCore)->Arg(99);

void BM_RunAdjustedClock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProtocolConfig cfg = proto(ProtocolKind::PaCore, n, 10.0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(cfg, split_stream(1, trial++)));
  }
  // Each run moves (n+1)^2 messages; report the per-message rate too.
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 1));
}
BENCHMARK(BM_RunAdjustedClock)->Arg(20)->Arg(50);

void BM_AgreementFloor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::psi(n));
  }
}
BENCHMARK(BM_AgreementFloor)->Arg(200)->Arg(100000);

void BM_CutoffSolve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::cutoff_n_complement(1e-9));
  }
}
BENCHMARK(BM_CutoffSolve);

}  // namespace

BENCHMARK_MAIN();
