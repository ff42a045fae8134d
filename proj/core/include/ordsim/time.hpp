#pragma once

#include <stdexcept>

namespace ordsim {

// Simulation time in seconds, measured from the external input event at t = 0.
// Never negative: a negative or NaN value here means a scheduling bug upstream,
// so construction rejects it outright.
class SimTime {
 public:
  constexpr SimTime() = default;

  constexpr explicit SimTime(double seconds) : secs_(seconds) {
    if (!(seconds >= 0.0)) {
      throw std::invalid_argument("SimTime: seconds must be >= 0 and not NaN");
    }
  }

  [[nodiscard]] constexpr double seconds() const { return secs_; }

  friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;

  // Durations are plain doubles in seconds. Protocol math legitimately forms
  // negative intermediate values before clamping, so only the final event
  // times pass through here.
  [[nodiscard]] constexpr SimTime advanced_by(double duration_seconds) const {
    return SimTime(secs_ + duration_seconds);
  }

 private:
  double secs_ = 0.0;
};

// Message delay rate lambda, in 1/seconds. Strictly positive and finite.
class Rate {
 public:
  constexpr explicit Rate(double per_second) : value_(per_second) {
    if (!(per_second > 0.0) || !(per_second <= 1e308)) {
      throw std::invalid_argument("Rate: lambda must be finite and > 0");
    }
  }

  [[nodiscard]] constexpr double per_second() const { return value_; }
  [[nodiscard]] constexpr double mean_delay_seconds() const { return 1.0 / value_; }

 private:
  double value_;
};

}  // namespace ordsim
