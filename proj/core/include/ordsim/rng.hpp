#pragma once

#include <cstdint>
#include <random>

namespace ordsim {

// SplitMix64 finalizer, used only for seed derivation (never as the draw
// engine). Fixed constants keep derived streams identical across machines.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of substream `stream_index` under `seed`. The index is finalized first
// so that consecutive indices land far apart, then folded into the parent seed
// and finalized again. Pure function of its two inputs.
[[nodiscard]] constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                                         std::uint64_t stream_index) {
  return splitmix64(seed ^ splitmix64(stream_index));
}

// Deterministic random stream addressed by (master_seed, stream_index).
// Trial i always draws from split_stream(seed, i), no matter which worker
// thread runs it or in what order, so parallel Monte Carlo runs reproduce the
// single-threaded results bit for bit. The engine is std::mt19937_64, whose
// output sequence is pinned by the standard, so draws are portable too.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : seed_(derive_stream_seed(master_seed, stream_index)), engine_(seed_) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]: (x >> 11) + 1 scaled by 2^-53. The open lower end
  // keeps -log(u) finite for inverse-CDF exponential sampling.
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Child stream c of this stream; equals RngStream(stream_seed(), c), so the
  // whole ancestry is a pure function of (master_seed, index, child indices).
  [[nodiscard]] RngStream derive(std::uint64_t child_index) const {
    return RngStream(seed_, child_index);
  }

  [[nodiscard]] std::uint64_t stream_seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

[[nodiscard]] RngStream split_stream(std::uint64_t master_seed, std::uint64_t stream_index);

}  // namespace ordsim
