#include "walklab/env_stepper.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"

namespace walklab {

StepperEnv::StepperEnv(EnvironmentLayout layout, double reset_jitter)
    : layout_(std::move(layout)), reset_jitter_(reset_jitter) {
  layout_.validate();
  if (!(reset_jitter_ >= 0.0))
    throw ValidationError("reset jitter must be >= 0");
  targets_ = layout_.distance_targets();

  const double ps = layout_.workspace_extent();
  obs_layout_.segments = {
      {"base", 2, ps},
      {"feet", 4, kMaxStride},  // per-leg offsets from base, heading frame
      {"heading", 2, 1.0},      // sin, cos
      {"obstacles", 2 * static_cast<int>(layout_.obstacles.size()), ps},
      {"destination", 2, ps},
      {"clock", 2, 1.0},
  };

  diag_names_ = {"rt_regularity", "rt_compliance", "rt_velocity",
                 "rt_action_rate"};
  for (std::size_t i = 0; i < targets_.size(); ++i)
    diag_names_.push_back("rt_" + target_label(targets_[i], static_cast<int>(i)));
  diag_names_.push_back("rt_goal_bonus");
  diag_names_.push_back("collision");
  diag_names_.push_back("dist_goal");
  diag_names_.push_back("step_length");
  prev_action_.assign(3, 0.0);
}

Leg StepperEnv::swing_leg() const {
  // Left stance window is [0, 0.5): while the left foot is planted the right
  // one swings.
  return clock_.phase < 0.5 ? Leg::right : Leg::left;
}

std::vector<double> StepperEnv::observe() const {
  std::vector<double> o;
  o.reserve(obs_layout_.total_dim());
  const double ps = layout_.workspace_extent();
  o.push_back(bx_ / ps);
  o.push_back(by_ / ps);
  const double ch = std::cos(heading_), sh = std::sin(heading_);
  for (int leg = 0; leg < 2; ++leg) {
    const double dx = foot_[leg][0] - bx_;
    const double dy = foot_[leg][1] - by_;
    // world -> heading frame
    o.push_back((ch * dx + sh * dy) / kMaxStride);
    o.push_back((-sh * dx + ch * dy) / kMaxStride);
  }
  o.push_back(sh);
  o.push_back(ch);
  for (const Circle& c : layout_.obstacles) {
    o.push_back(c.x / ps);
    o.push_back(c.y / ps);
  }
  o.push_back(layout_.dest_x / ps);
  o.push_back(layout_.dest_y / ps);
  auto [csin, ccos] = clock_features(clock_);
  o.push_back(csin);
  o.push_back(ccos);
  return o;
}

StepResult StepperEnv::reset(SplitRng& rng) {
  bx_ = layout_.init_x;
  by_ = layout_.init_y;
  if (reset_jitter_ > 0.0) {
    bx_ += reset_jitter_ * rng.normal();
    by_ += reset_jitter_ * rng.normal();
  }
  heading_ = std::atan2(layout_.dest_y - by_, layout_.dest_x - bx_);
  // Feet straddle the base laterally; "left" is +90 deg from the heading.
  const double lx = -std::sin(heading_), ly = std::cos(heading_);
  foot_[0][0] = bx_ + kFootHalfGap * lx;
  foot_[0][1] = by_ + kFootHalfGap * ly;
  foot_[1][0] = bx_ - kFootHalfGap * lx;
  foot_[1][1] = by_ - kFootHalfGap * ly;
  clock_ = Clock{};
  step_count_ = 0;
  prev_action_.assign(3, 0.0);
  prev_step_len_ = -1.0;
  last_step_len_ = 0.0;
  last_swing_ = static_cast<int>(swing_leg());
  StepResult r;
  r.obs = observe();
  return r;
}

StepResult StepperEnv::step(std::span<const double> action) {
  if (action.size() != 3)
    throw ValidationError("stepper action must be 3-dimensional");
  for (double a : action)
    if (!std::isfinite(a)) throw ValidationError("non-finite action");

  const double dx = std::clamp(action[0], -1.0, 1.0) * kStepMax;
  const double dy = std::clamp(action[1], -1.0, 1.0) * kStepMax;
  const double dth = std::clamp(action[2], -1.0, 1.0) * kTurnMax;

  const int swing = static_cast<int>(swing_leg());
  const int stance = 1 - swing;
  last_swing_ = swing;

  heading_ += dth;
  const double ch = std::cos(heading_), sh = std::sin(heading_);
  const double old_fx = foot_[swing][0], old_fy = foot_[swing][1];
  double fx = old_fx + ch * dx - sh * dy;
  double fy = old_fy + sh * dx + ch * dy;
  // Clamp the new swing position into the stride disk of the stance foot.
  const double sx = foot_[stance][0], sy = foot_[stance][1];
  const double sep = std::hypot(fx - sx, fy - sy);
  if (sep > kMaxStride) {
    fx = sx + (fx - sx) * kMaxStride / sep;
    fy = sy + (fy - sy) * kMaxStride / sep;
  }
  foot_[swing][0] = fx;
  foot_[swing][1] = fy;
  last_step_len_ = std::hypot(fx - old_fx, fy - old_fy);

  const double obx = bx_, oby = by_;
  bx_ = 0.5 * (foot_[0][0] + foot_[1][0]);
  by_ = 0.5 * (foot_[0][1] + foot_[1][1]);
  const double ctrl_dt = 0.5 * clock_.period;  // one footstep per half cycle
  clock_ = clock_advance(clock_, ctrl_dt);
  step_count_ += 1;

  // Gait terms.
  const double reg_err =
      prev_step_len_ < 0.0 ? 0.0 : last_step_len_ - prev_step_len_;
  const double regularity = std::exp(-c_regular_ * reg_err * reg_err);
  prev_step_len_ = last_step_len_;

  // Lateral order in the heading frame: the left foot must stay left.
  const double lat_l = -sh * (foot_[0][0] - bx_) + ch * (foot_[0][1] - by_);
  const double lat_r = -sh * (foot_[1][0] - bx_) + ch * (foot_[1][1] - by_);
  const double compliance = std::clamp((lat_l - lat_r) / lat_scale_, 0.0, 1.0);

  const double vx = (bx_ - obx) / ctrl_dt;
  const double vy = (by_ - oby) / ctrl_dt;
  const double gx = layout_.dest_x - bx_;
  const double gy = layout_.dest_y - by_;
  const double gd = std::hypot(gx, gy);
  double cvx = 0.0, cvy = 0.0;
  if (gd > 1e-9) {
    cvx = kCmdSpeed * gx / gd;
    cvy = kCmdSpeed * gy / gd;
  }
  const double verr = (vx - cvx) * (vx - cvx) + (vy - cvy) * (vy - cvy);
  const double velocity = std::exp(-c_velocity_ * verr);

  double da2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = std::clamp(action[i], -1.0, 1.0) - prev_action_[i];
    da2 += d * d;
  }
  const double action_rate = -0.1 * da2;

  const double loco = w_regular_ * regularity + w_compliance_ * compliance +
                      w_velocity_ * velocity + w_action_rate_ * action_rate;
  DistanceReward dist = distance_reward(bx_, by_, targets_);

  StepResult r;
  r.reward = total_reward(loco, dist.total);

  const bool at_goal = gd <= layout_.goal_radius;
  bool collided = false;
  if (!at_goal) {
    for (const Circle& c : layout_.obstacles) {
      if (std::hypot(bx_ - c.x, by_ - c.y) < c.r ||
          std::hypot(foot_[0][0] - c.x, foot_[0][1] - c.y) < c.r ||
          std::hypot(foot_[1][0] - c.x, foot_[1][1] - c.y) < c.r) {
        collided = true;
        break;
      }
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
  r.info.push_back(w_regular_ * regularity);
  r.info.push_back(w_compliance_ * compliance);
  r.info.push_back(w_velocity_ * velocity);
  r.info.push_back(w_action_rate_ * action_rate);
  for (double v : dist.per_target) r.info.push_back(v);
  r.info.push_back(bonus);
  r.info.push_back(collided ? 1.0 : 0.0);
  r.info.push_back(gd);
  r.info.push_back(last_step_len_);

  for (int i = 0; i < 3; ++i)
    prev_action_[i] = std::clamp(action[i], -1.0, 1.0);
  r.obs = observe();
  return r;
}

std::vector<std::string> StepperEnv::trajectory_columns() const {
  return {"step", "base_x", "base_y", "swing", "swing_x", "swing_y",
          "step_length"};
}

std::vector<double> StepperEnv::trajectory_row() const {
  return {static_cast<double>(step_count_),
          bx_,
          by_,
          static_cast<double>(last_swing_),
          foot_[last_swing_][0],
          foot_[last_swing_][1],
          last_step_len_};
}

}  // namespace walklab
