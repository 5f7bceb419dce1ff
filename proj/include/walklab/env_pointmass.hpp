#pragma once

#include "walklab/env.hpp"
#include "walklab/layout.hpp"
#include "walklab/rewards.hpp"

namespace walklab {

// 2D double integrator steered by acceleration commands; the minimal testbed
// for the exponential attract/repel shaping and the robustness protocol.
class PointMassEnv : public Environment {
 public:
  static constexpr double kDt = 0.05;       // s per control step
  static constexpr double kAccelMax = 2.0;  // m/s^2
  static constexpr double kSpeedMax = 1.5;  // m/s
  static constexpr double kCmdSpeed = 1.0;  // m/s commanded toward the goal

  // reset_jitter: stddev (m) of the seeded positional jitter at reset; 0
  // reproduces the layout's initial position exactly.
  explicit PointMassEnv(EnvironmentLayout layout, double reset_jitter = 0.05);

  const ObservationLayout& obs_layout() const override { return obs_layout_; }
  int action_dim() const override { return 2; }
  const std::vector<std::string>& diagnostics() const override { return diag_names_; }

  StepResult reset(SplitRng& rng) override;
  StepResult step(std::span<const double> action) override;

  std::vector<std::string> trajectory_columns() const override;
  std::vector<double> trajectory_row() const override;

  const EnvironmentLayout& layout() const { return layout_; }

 private:
  std::vector<double> observe() const;

  EnvironmentLayout layout_;
  std::vector<DistanceTarget> targets_;
  double reset_jitter_;
  ObservationLayout obs_layout_;
  std::vector<std::string> diag_names_;
  LocomotionWeights w1_;
  LocomotionShaping shaping_;

  double px_ = 0.0, py_ = 0.0;
  double vx_ = 0.0, vy_ = 0.0;
  int step_count_ = 0;
  std::vector<double> prev_action_;
};

}  // namespace walklab
