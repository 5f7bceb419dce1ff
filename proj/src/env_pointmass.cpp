#include "walklab/env_pointmass.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"

namespace walklab {

PointMassEnv::PointMassEnv(EnvironmentLayout layout, double reset_jitter)
    : layout_(std::move(layout)), reset_jitter_(reset_jitter) {
  layout_.validate();
  if (!(reset_jitter_ >= 0.0))
    throw ValidationError("reset jitter must be >= 0");
  targets_ = layout_.distance_targets();

  const double ps = layout_.workspace_extent();
  obs_layout_.segments = {
      {"position", 2, ps},
      {"velocity", 2, kSpeedMax},
      {"obstacles", 2 * static_cast<int>(layout_.obstacles.size()), ps},
      {"destination", 2, ps},
  };

  // Only the velocity-toward-goal term and the action-rate penalty are
  // active; there is no gait here.
  w1_ = LocomotionWeights{};
  w1_.foot_force = w1_.foot_speed = w1_.upright = w1_.height = w1_.torque = 0.0;

  diag_names_ = {"rt_velocity", "rt_action_rate"};
  for (std::size_t i = 0; i < targets_.size(); ++i)
    diag_names_.push_back("rt_" + target_label(targets_[i], static_cast<int>(i)));
  diag_names_.push_back("rt_goal_bonus");
  diag_names_.push_back("collision");
  diag_names_.push_back("dist_goal");
  prev_action_.assign(2, 0.0);
}

std::vector<double> PointMassEnv::observe() const {
  std::vector<double> o;
  o.reserve(obs_layout_.total_dim());
  const double ps = layout_.workspace_extent();
  o.push_back(px_ / ps);
  o.push_back(py_ / ps);
  o.push_back(vx_ / kSpeedMax);
  o.push_back(vy_ / kSpeedMax);
  for (const Circle& c : layout_.obstacles) {
    o.push_back(c.x / ps);
    o.push_back(c.y / ps);
  }
  o.push_back(layout_.dest_x / ps);
  o.push_back(layout_.dest_y / ps);
  return o;
}

StepResult PointMassEnv::reset(SplitRng& rng) {
  px_ = layout_.init_x;
  py_ = layout_.init_y;
  if (reset_jitter_ > 0.0) {
    px_ += reset_jitter_ * rng.normal();
    py_ += reset_jitter_ * rng.normal();
  }
  vx_ = vy_ = 0.0;
  step_count_ = 0;
  prev_action_.assign(2, 0.0);
  StepResult r;
  r.obs = observe();
  return r;
}

StepResult PointMassEnv::step(std::span<const double> action) {
  if (action.size() != 2)
    throw ValidationError("pointmass action must be 2-dimensional");
  for (double a : action)
    if (!std::isfinite(a)) throw ValidationError("non-finite action");

  const double ax = std::clamp(action[0], -1.0, 1.0) * kAccelMax;
  const double ay = std::clamp(action[1], -1.0, 1.0) * kAccelMax;
  vx_ += ax * kDt;
  vy_ += ay * kDt;
  const double speed = std::hypot(vx_, vy_);
  if (speed > kSpeedMax) {
    vx_ *= kSpeedMax / speed;
    vy_ *= kSpeedMax / speed;
  }
  px_ += vx_ * kDt;
  py_ += vy_ * kDt;
  step_count_ += 1;

  // Locomotion part: velocity tracking toward the goal + action-rate penalty.
  LocomotionState ls;
  ls.base_velocity = {vx_, vy_};
  const double gx = layout_.dest_x - px_;
  const double gy = layout_.dest_y - py_;
  const double gd = std::hypot(gx, gy);
  if (gd > 1e-9)
    ls.commanded_velocity = {kCmdSpeed * gx / gd, kCmdSpeed * gy / gd};
  ls.action = {std::clamp(action[0], -1.0, 1.0), std::clamp(action[1], -1.0, 1.0)};
  ls.prev_action = prev_action_;
  const Clock no_clock;
  LocomotionReward loco = locomotion_reward(ls, no_clock, w1_, shaping_);
  DistanceReward dist = distance_reward(px_, py_, targets_);

  StepResult r;
  r.reward = total_reward(loco.total, dist.total);

  const bool at_goal = gd <= layout_.goal_radius;
  bool collided = false;
  if (!at_goal) {
    for (const Circle& c : layout_.obstacles)
      if (std::hypot(px_ - c.x, py_ - c.y) < c.r) {
        collided = true;
        break;
      }
  }
  double bonus = 0.0;
  if (at_goal) {
    bonus = layout_.goal_bonus;
    r.reward += bonus;
    r.terminated = true;
    r.reason = TermReason::goal;
  } else if (collided) {
    r.terminated = true;
    r.reason = TermReason::collision;
  } else if (step_count_ >= kEpisodeCap) {
    r.truncated = true;
    r.reason = TermReason::timeout;
  }

  r.info.reserve(diag_names_.size());
  r.info.push_back(loco.terms[4]);  // velocity
  r.info.push_back(loco.terms[6]);  // action_rate
  for (double v : dist.per_target) r.info.push_back(v);
  r.info.push_back(bonus);
  r.info.push_back(collided ? 1.0 : 0.0);
  r.info.push_back(gd);

  prev_action_ = ls.action;
  r.obs = observe();
  return r;
}

std::vector<std::string> PointMassEnv::trajectory_columns() const {
  return {"step", "x", "y", "vx", "vy"};
}

std::vector<double> PointMassEnv::trajectory_row() const {
  return {static_cast<double>(step_count_), px_, py_, vx_, vy_};
}

}  // namespace walklab
