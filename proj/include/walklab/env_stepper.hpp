#pragma once

#include "walklab/env.hpp"
#include "walklab/gaitclock.hpp"
#include "walklab/layout.hpp"
#include "walklab/rewards.hpp"

namespace walklab {

// Top-down clocked stepper: one footstep per control step, the swing leg
// alternating with the clock's half-cycles. Couples gait structure to planar
// navigation so the reward-shaping behaviors (step-in-place pathology,
// obstacle-weight vs step-size tradeoff) can be reproduced at desk scale.
class StepperEnv : public Environment {
 public:
  static constexpr double kStepMax = 0.25;    // m swing displacement per axis
  static constexpr double kMaxStride = 0.5;   // m max foot separation
  static constexpr double kTurnMax = 0.3;     // rad heading change per step
  static constexpr double kFootHalfGap = 0.1; // m lateral stance half-width
  static constexpr double kCmdSpeed = 0.25;   // m/s commanded toward the goal

  explicit StepperEnv(EnvironmentLayout layout, double reset_jitter = 0.05);

  const ObservationLayout& obs_layout() const override { return obs_layout_; }
  int action_dim() const override { return 3; }
  const std::vector<std::string>& diagnostics() const override { return diag_names_; }

  StepResult reset(SplitRng& rng) override;
  StepResult step(std::span<const double> action) override;

  std::vector<std::string> trajectory_columns() const override;
  std::vector<double> trajectory_row() const override;

  const EnvironmentLayout& layout() const { return layout_; }
  const Clock& clock() const { return clock_; }
  // Leg that will move on the next step() call.
  Leg swing_leg() const;

 private:
  std::vector<double> observe() const;

  EnvironmentLayout layout_;
  std::vector<DistanceTarget> targets_;
  double reset_jitter_;
  ObservationLayout obs_layout_;
  std::vector<std::string> diag_names_;

  // Gait term weights/shape (the stepper's locomotion part).
  double w_regular_ = 0.15;
  double w_compliance_ = 0.15;
  double w_velocity_ = 0.15;
  double w_action_rate_ = 0.05;
  double c_regular_ = 50.0;     // 1/m^2 on consecutive step-length difference
  double lat_scale_ = 0.2;      // m lateral separation for full compliance
  double c_velocity_ = 2.0;     // s^2/m^2

  double bx_ = 0.0, by_ = 0.0;
  double heading_ = 0.0;
  double foot_[2][2] = {{0, 0}, {0, 0}};  // [leg][xy], Leg::left = 0
  Clock clock_;
  int step_count_ = 0;
  std::vector<double> prev_action_;
  double prev_step_len_ = -1.0;  // <0: no previous swing yet
  double last_step_len_ = 0.0;
  int last_swing_ = 0;
};

}  // namespace walklab
