#pragma once

#include "walklab/biped.hpp"
#include "walklab/env.hpp"
#include "walklab/gaitclock.hpp"
#include "walklab/layout.hpp"
#include "walklab/rewards.hpp"

namespace walklab {

// Sagittal-plane biped walking toward a destination along +x. Full gait-term
// reward (clock-gated stance/swing credit, posture, velocity, effort) plus
// the destination distance term. A planar biped cannot sidestep, so layouts
// with obstacles are rejected; obstacle studies live in the planar envs.
class BipedEnv : public Environment {
 public:
  static constexpr double kCmdSpeed = 0.4;  // m/s commanded forward speed

  BipedEnv(BipedModel model, EnvironmentLayout layout, double reset_jitter = 0.05);

  const ObservationLayout& obs_layout() const override { return obs_layout_; }
  int action_dim() const override { return kBipedJoints; }
  const std::vector<std::string>& diagnostics() const override { return diag_names_; }

  StepResult reset(SplitRng& rng) override;
  StepResult step(std::span<const double> action) override;

  std::vector<std::string> trajectory_columns() const override;
  std::vector<double> trajectory_row() const override;

  const BipedModel& model() const { return model_; }
  const EnvironmentLayout& layout() const { return layout_; }
  const BipedState& state() const { return state_; }
  const Clock& clock() const { return clock_; }

 private:
  std::vector<double> observe() const;

  BipedModel model_;
  EnvironmentLayout layout_;
  std::vector<DistanceTarget> targets_;
  double reset_jitter_;
  ObservationLayout obs_layout_;
  std::vector<std::string> diag_names_;
  LocomotionWeights w1_;
  LocomotionShaping shaping_;

  BipedState state_;
  Clock clock_;
};

}  // namespace walklab
