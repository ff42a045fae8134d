#include "ordsim/delay_source.hpp"

#include <cmath>
#include <string>

namespace ordsim {

namespace {

std::string exhausted_message(std::size_t draw_index, std::size_t script_size) {
  return "scripted delay source exhausted: draw index " + std::to_string(draw_index) +
         " requested but the script holds only " + std::to_string(script_size) + " value(s)";
}

}  // namespace

ScriptedExhausted::ScriptedExhausted(std::size_t draw_index, std::size_t script_size)
    : std::runtime_error(exhausted_message(draw_index, script_size)),
      draw_index_(draw_index) {}

double exponential_inverse_cdf(double u, Rate lambda) {
  if (!(u > 0.0) || !(u <= 1.0)) {
    throw std::invalid_argument("exponential_inverse_cdf: u must lie in (0, 1]");
  }
  return -std::log(u) / lambda.per_second();
}

DelaySource DelaySource::exponential(Rate lambda) {
  return DelaySource(Exponential{lambda});
}

DelaySource DelaySource::constant(double delay_seconds) {
  if (!(delay_seconds >= 0.0)) {
    throw std::invalid_argument("DelaySource::constant: delay must be >= 0");
  }
  return DelaySource(Constant{delay_seconds});
}

DelaySource DelaySource::scripted(std::vector<double> delays) {
  if (delays.empty()) {
    throw std::invalid_argument("DelaySource::scripted: the script must not be empty");
  }
  for (double d : delays) {
    if (!(d >= 0.0)) {
      throw std::invalid_argument("DelaySource::scripted: every delay must be >= 0");
    }
  }
  return DelaySource(Scripted{
      std::make_shared<const std::vector<double>>(std::move(delays)), 0});
}

double DelaySource::sample(RngStream& stream) {
  const std::size_t index = draws_++;
  return std::visit(
      [&](auto& mode) -> double {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return exponential_inverse_cdf(stream.uniform01(), mode.lambda);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return mode.delay;
        } else {
          if (mode.next >= mode.delays->size()) {
            throw ScriptedExhausted(index, mode.delays->size());
          }
          return (*mode.delays)[mode.next++];
        }
      },
      impl_);
}

double sample_delay(DelaySource& source, RngStream& stream) {
  return source.sample(stream);
}

}  // namespace ordsim
