#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ordsim/rng.hpp"
#include "ordsim/time.hpp"

namespace ordsim {

// A scripted source ran out of values. draw_index is the zero-based index of
// the draw that could not be served; callers running batches of trials wrap
// this with the trial number.
class ScriptedExhausted : public std::runtime_error {
 public:
  ScriptedExhausted(std::size_t draw_index, std::size_t script_size);

  [[nodiscard]] std::size_t draw_index() const { return draw_index_; }

 private:
  std::size_t draw_index_;
};

// Inverse CDF of Exp(lambda) at u in (0, 1]: -ln(u)/lambda.
[[nodiscard]] double exponential_inverse_cdf(double u, Rate lambda);

// Per-message delay generator, the randomness boundary of the model.
// Value semantics: each simulated run samples from its own copy of the
// configured source, which restarts a scripted source from the head of its
// script. Only the exponential mode consumes uniforms from the stream.
class DelaySource {
 public:
  static DelaySource exponential(Rate lambda);
  static DelaySource constant(double delay_seconds);
  static DelaySource scripted(std::vector<double> delays);

  // Next delay in seconds, always >= 0.
  double sample(RngStream& stream);

  [[nodiscard]] std::size_t draws() const { return draws_; }

 private:
  struct Exponential {
    Rate lambda;
  };
  struct Constant {
    double delay;
  };
  struct Scripted {
    std::shared_ptr<const std::vector<double>> delays;
    std::size_t next = 0;
  };

  explicit DelaySource(std::variant<Exponential, Constant, Scripted> impl)
      : impl_(std::move(impl)) {}

  std::variant<Exponential, Constant, Scripted> impl_;
  std::size_t draws_ = 0;
};

// Spelled-out form of DelaySource::sample for call sites that read better
// with a free function.
[[nodiscard]] double sample_delay(DelaySource& source, RngStream& stream);

}  // namespace ordsim
