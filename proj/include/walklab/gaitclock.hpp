#pragma once

#include <cstdint>
#include <utility>

namespace walklab {

enum class Leg : uint8_t { left = 0, right = 1 };

// Periodic gait phase shared by the biped and the stepper. Left and right
// stance windows are offset by half a cycle (alternating gait).
struct Clock {
  double phase = 0.0;        // in [0, 1)
  double period = 0.8;       // seconds per cycle
  double offset_left = 0.0;  // stance-window start, in cycle fractions
  double offset_right = 0.5;
  double duty = 0.5;         // stance fraction of the cycle
  double ramp = 0.02;        // full width of each linear indicator ramp

  void validate() const;
};

// phase' = (phase + dt/period) mod 1.
Clock clock_advance(const Clock& clock, double dt);

// (sin 2*pi*phase, cos 2*pi*phase) fed to the policy.
std::pair<double, double> clock_features(const Clock& clock);

// Trapezoidal stance window indicator: 1 inside [offset, offset+duty), 0 in
// the swing interior, with linear ramps of width `ramp` centered on both
// boundaries. Centering makes left + right sum to exactly 1 at duty 0.5.
double stance_indicator(const Clock& clock, Leg leg);

// Complement used for swing gating.
inline double swing_indicator(const Clock& clock, Leg leg) {
  return 1.0 - stance_indicator(clock, leg);
}

}  // namespace walklab
