#include "walklab/gaitclock.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"

namespace walklab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap01(double x) {
  double r = std::fmod(x, 1.0);
  return r < 0.0 ? r + 1.0 : r;
}

// Signed circular distance from x to 0, in [-0.5, 0.5).
double signed_dist(double x) {
  double r = wrap01(x);
  return r < 0.5 ? r : r - 1.0;
}

}  // namespace

void Clock::validate() const {
  if (!(period > 0.0)) throw ValidationError("clock period must be > 0");
  if (!(duty > 0.0 && duty < 1.0)) throw ValidationError("clock duty out of (0,1)");
  if (!(ramp > 0.0)) throw ValidationError("clock ramp must be > 0");
  if (phase < 0.0 || phase >= 1.0) throw ValidationError("clock phase out of [0,1)");
}

Clock clock_advance(const Clock& clock, double dt) {
  if (dt < 0.0) throw ValidationError("clock_advance: dt must be >= 0");
  Clock out = clock;
  out.phase = wrap01(clock.phase + dt / clock.period);
  return out;
}

std::pair<double, double> clock_features(const Clock& clock) {
  return {std::sin(kTwoPi * clock.phase), std::cos(kTwoPi * clock.phase)};
}

double stance_indicator(const Clock& clock, Leg leg) {
  const double offset =
      leg == Leg::left ? clock.offset_left : clock.offset_right;
  // Circular distance from the stance-window center; unlike an edge-anchored
  // signed distance this is continuous everywhere on the circle, so the two
  // centered ramps meet the 0/1 plateaus without jumps.
  const double center = offset + 0.5 * clock.duty;
  const double c = std::abs(signed_dist(clock.phase - center));
  const double half = 0.5 * clock.ramp;
  return std::clamp((0.5 * clock.duty + half - c) / clock.ramp, 0.0, 1.0);
}

}  // namespace walklab
