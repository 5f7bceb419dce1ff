#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "walklab/gaitclock.hpp"

namespace walklab {

enum class TargetKind : uint8_t { destination = 0, obstacle = 1, initial_position = 2 };

const char* target_kind_name(TargetKind k);

// One exponential attract/repel field source. `weight` carries the sign:
// positive pulls toward the destination, negative pushes away from obstacles
// and the start position.
struct DistanceTarget {
  double x = 0.0;
  double y = 0.0;
  double k = 1.0;       // field decay rate, 1/m
  double weight = 0.0;  // signed contribution scale
  TargetKind kind = TargetKind::destination;

  // k > 0; destination weight > 0; obstacle/initial weights < 0.
  void validate() const;
};

// exp(-k * ||base - target||) in the x-y plane, in (0, 1].
double distance_term(double base_x, double base_y, const DistanceTarget& target);

struct DistanceReward {
  double total = 0.0;
  std::vector<double> per_target;  // weighted contributions, aligned with input
};

DistanceReward distance_reward(double base_x, double base_y,
                               std::span<const DistanceTarget> targets);

// Log label for one target's breakdown entry, e.g. "obstacle1".
std::string target_label(const DistanceTarget& target, int index);

// Everything the gait-term library looks at for one control step. Foot order
// is {left, right} throughout.
struct LocomotionState {
  double orientation_error = 0.0;             // rad from upright
  double height_error = 0.0;                  // m from nominal base height
  std::array<double, 2> base_velocity{};      // m/s, planar
  std::array<double, 2> commanded_velocity{}; // m/s, toward the destination
  std::array<double, 2> foot_force{};         // N, >= 0 (binary for the stepper)
  std::array<double, 2> foot_speed{};         // m/s, >= 0
  std::vector<double> joint_torque;           // N*m
  std::vector<double> prev_action;
  std::vector<double> action;

  void validate() const;
};

// Nonnegative per-term weights (the W1 of the composite reward). Penalty
// terms carry their sign inside the term value.
struct LocomotionWeights {
  double foot_force = 0.15;
  double foot_speed = 0.15;
  double upright = 0.15;
  double height = 0.15;
  double velocity = 0.15;
  double torque = 0.05;
  double action_rate = 0.05;

  void validate() const;
  double positive_sum() const;  // sum over the five bounded-in-[0,1] terms
};

// Shape constants of the individual terms; desk-scale defaults.
struct LocomotionShaping {
  double c_upright = 5.0;      // 1/rad^2
  double c_height = 50.0;      // 1/m^2
  double c_velocity = 2.0;     // s^2/m^2
  double c_torque = 1e-5;      // 1/(N*m)^2
  double c_action_rate = 0.1;
  double force_scale = 200.0;  // N at which the stance-force term saturates
  double speed_scale = 0.3;    // m/s at which the swing-speed term saturates

  void validate() const;
};

inline constexpr int kNumLocomotionTerms = 7;
extern const std::array<const char*, kNumLocomotionTerms> kLocomotionTermNames;

struct LocomotionReward {
  double total = 0.0;
  std::array<double, kNumLocomotionTerms> terms{};  // weighted, aligned with names
};

// Weighted sum of the seven gait-cycle terms:
//   foot_force:  sum_f stance_f * min(force_f/F0, 1)
//   foot_speed:  0.5 * sum_f [stance_f * max(0, 1 - speed_f/s0)
//                             + swing_f * min(speed_f/s0, 1)]
//   upright:     exp(-c1 * orientation_error^2)
//   height:      exp(-c2 * height_error^2)
//   velocity:    exp(-c3 * ||v - v_cmd||^2)
//   torque:      -c4 * ||tau||^2
//   action_rate: -c5 * ||a_t - a_{t-1}||^2
LocomotionReward locomotion_reward(const LocomotionState& state,
                                   const Clock& clock,
                                   const LocomotionWeights& weights,
                                   const LocomotionShaping& shaping);

// Composite step reward; both parts already carry their weights.
inline double total_reward(double locomotion, double distance) {
  return locomotion + distance;
}

}  // namespace walklab
