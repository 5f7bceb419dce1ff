#include "walklab/env_biped.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "walklab/error.hpp"

namespace walklab {

BipedEnv::BipedEnv(BipedModel model, EnvironmentLayout layout,
                   double reset_jitter)
    : model_(std::move(model)),
      layout_(std::move(layout)),
      reset_jitter_(reset_jitter) {
  model_.validate();
  layout_.validate();
  if (!layout_.obstacles.empty())
    throw ValidationError(
        "biped layouts cannot contain obstacles (sagittal plane only)");
  if (!(reset_jitter_ >= 0.0))
    throw ValidationError("reset jitter must be >= 0");
  targets_ = layout_.distance_targets();

  const double ps = layout_.workspace_extent();
  obs_layout_.segments = {
      {"joints", kBipedJoints, std::numbers::pi},
      {"joint_rates", kBipedJoints, 10.0},
      {"pitch", 1, std::numbers::pi},
      {"pitch_rate", 1, 10.0},
      {"goal_dx", 1, ps},
      {"clock", 2, 1.0},
  };

  diag_names_.assign(kLocomotionTermNames.begin(), kLocomotionTermNames.end());
  for (std::string& n : diag_names_) n = "rt_" + n;
  for (std::size_t i = 0; i < targets_.size(); ++i)
    diag_names_.push_back("rt_" + target_label(targets_[i], static_cast<int>(i)));
  diag_names_.push_back("dist_goal");
  diag_names_.push_back("forward_x");
}

std::vector<double> BipedEnv::observe() const {
  std::vector<double> o;
  o.reserve(obs_layout_.total_dim());
  const double ps = layout_.workspace_extent();
  for (int j = 0; j < kBipedJoints; ++j)
    o.push_back(state_.q[3 + j] / std::numbers::pi);
  for (int j = 0; j < kBipedJoints; ++j) o.push_back(state_.qd[3 + j] / 10.0);
  o.push_back(state_.q[2] / std::numbers::pi);
  o.push_back(state_.qd[2] / 10.0);
  o.push_back((layout_.dest_x - state_.q[0]) / ps);
  auto [csin, ccos] = clock_features(clock_);
  o.push_back(csin);
  o.push_back(ccos);
  return o;
}

StepResult BipedEnv::reset(SplitRng& rng) {
  state_ = BipedState{};
  state_.q[0] = layout_.init_x;
  for (int j = 0; j < kBipedJoints; ++j) state_.q[3 + j] = model_.posture[j];
  if (reset_jitter_ > 0.0) {
    state_.q[0] += reset_jitter_ * rng.normal();
    for (int j = 0; j < kBipedJoints; ++j)
      state_.q[3 + j] += 0.2 * reset_jitter_ * rng.normal();
  }
  // Settle the lower foot into its static preload penetration.
  const double drop =
      std::max(-biped_foot_pos(model_, state_.q, Leg::left)[1] + state_.q[1],
               -biped_foot_pos(model_, state_.q, Leg::right)[1] + state_.q[1]);
  const double preload =
      model_.total_mass() * kGravity / (2.0 * model_.ground_k);
  state_.q[1] = drop - preload;
  clock_ = Clock{};
  StepResult r;
  r.obs = observe();
  return r;
}

StepResult BipedEnv::step(std::span<const double> action) {
  if (static_cast<int>(action.size()) != kBipedJoints)
    throw ValidationError("biped action must be 4-dimensional");
  for (double a : action)
    if (!std::isfinite(a)) throw ValidationError("non-finite action");

  Joints act{};
  Joints target{};
  for (int j = 0; j < kBipedJoints; ++j) {
    act[j] = std::clamp(action[j], -1.0, 1.0);
    target[j] = model_.posture[j] + model_.action_range * act[j];
  }

  const double x_before = state_.q[0];
  std::array<double, 2> force_sum{};
  std::array<double, 2> speed_sum{};
  Joints torque_sq_sum{};
  for (int s = 0; s < model_.substeps; ++s) {
    const Joints tau = pd_torque(model_, target, state_.q, state_.qd);
    for (int j = 0; j < kBipedJoints; ++j) torque_sq_sum[j] += tau[j] * tau[j];
    const auto contacts = biped_substep(model_, state_, tau);
    for (int f = 0; f < 2; ++f) {
      force_sum[f] += contacts[f].normal;
      const auto v =
          biped_foot_vel(model_, state_.q, state_.qd, static_cast<Leg>(f));
      speed_sum[f] += std::hypot(v[0], v[1]);
    }
    if (!state_.all_finite()) break;
  }
  state_.step_count += 1;
  clock_ = clock_advance(clock_, model_.dt * model_.substeps);

  StepResult r;
  if (!state_.all_finite()) {
    r.terminated = true;
    r.reason = TermReason::divergence;
    r.obs.assign(obs_layout_.total_dim(), 0.0);
    r.info.assign(diag_names_.size(), 0.0);
    return r;
  }

  const double inv_n = 1.0 / model_.substeps;
  LocomotionState ls;
  ls.orientation_error = state_.q[2];
  ls.height_error = state_.q[1] - model_.standing_height();
  ls.base_velocity = {state_.qd[0], 0.0};
  const double gx = layout_.dest_x - state_.q[0];
  const double gy = layout_.dest_y;
  const double gd = std::hypot(gx, gy);
  if (gd > 1e-9)
    ls.commanded_velocity = {kCmdSpeed * gx / gd, kCmdSpeed * gy / gd};
  ls.foot_force = {force_sum[0] * inv_n, force_sum[1] * inv_n};
  ls.foot_speed = {speed_sum[0] * inv_n, speed_sum[1] * inv_n};
  ls.joint_torque.resize(kBipedJoints);
  for (int j = 0; j < kBipedJoints; ++j)
    ls.joint_torque[j] = std::sqrt(torque_sq_sum[j] * inv_n);  // RMS
  ls.prev_action.assign(state_.prev_action.begin(), state_.prev_action.end());
  ls.action.assign(act.begin(), act.end());

  const LocomotionReward loco = locomotion_reward(ls, clock_, w1_, shaping_);
  const DistanceReward dist =
      distance_reward(state_.q[0], 0.0, targets_);
  r.reward = total_reward(loco.total, dist.total);

  if (state_.q[1] < 0.5 * model_.standing_height() ||
      std::abs(state_.q[2]) > 1.0) {
    r.terminated = true;
    r.reason = TermReason::fall;
  } else if (state_.step_count >= kEpisodeCap) {
    r.truncated = true;
    r.reason = TermReason::timeout;
  }

  r.info.reserve(diag_names_.size());
  for (double t : loco.terms) r.info.push_back(t);
  for (double v : dist.per_target) r.info.push_back(v);
  r.info.push_back(gd);
  r.info.push_back(state_.q[0] - x_before);

  state_.prev_action = act;
  r.obs = observe();
  return r;
}

std::vector<std::string> BipedEnv::trajectory_columns() const {
  return {"step",  "x",      "z",      "pitch",  "hipL",  "kneeL", "hipR",
          "kneeR", "dx",     "dz",     "dpitch", "dhipL", "dkneeL", "dhipR",
          "dkneeR", "fnL",   "ftL",    "fnR",    "ftR"};
}

std::vector<double> BipedEnv::trajectory_row() const {
  std::vector<double> row;
  row.reserve(19);
  row.push_back(static_cast<double>(state_.step_count));
  for (double v : state_.q) row.push_back(v);
  for (double v : state_.qd) row.push_back(v);
  row.push_back(state_.contact[0].normal);
  row.push_back(state_.contact[0].tangent);
  row.push_back(state_.contact[1].normal);
  row.push_back(state_.contact[1].tangent);
  return row;
}

}  // namespace walklab
