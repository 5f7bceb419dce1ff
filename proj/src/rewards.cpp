#include "walklab/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"

namespace walklab {

const char* target_kind_name(TargetKind k) {
  switch (k) {
    case TargetKind::destination: return "destination";
    case TargetKind::obstacle: return "obstacle";
    case TargetKind::initial_position: return "initial";
  }
  return "?";
}

void DistanceTarget::validate() const {
  if (!(k > 0.0)) throw ValidationError("distance target k must be > 0");
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(weight))
    throw ValidationError("distance target has non-finite fields");
  if (kind == TargetKind::destination && !(weight > 0.0))
    throw ValidationError("destination weight must be > 0");
  if (kind != TargetKind::destination && !(weight < 0.0))
    throw ValidationError("obstacle/initial weights must be < 0");
}

double distance_term(double base_x, double base_y, const DistanceTarget& target) {
  const double dx = base_x - target.x;
  const double dy = base_y - target.y;
  return std::exp(-target.k * std::sqrt(dx * dx + dy * dy));
}

DistanceReward distance_reward(double base_x, double base_y,
                               std::span<const DistanceTarget> targets) {
  DistanceReward out;
  out.per_target.reserve(targets.size());
  for (const auto& t : targets) {
    const double c = t.weight * distance_term(base_x, base_y, t);
    out.per_target.push_back(c);
    out.total += c;
  }
  return out;
}

std::string target_label(const DistanceTarget& target, int index) {
  std::string label = target_kind_name(target.kind);
  if (target.kind == TargetKind::obstacle) label += std::to_string(index);
  return label;
}

void LocomotionState::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(orientation_error) || !finite(height_error))
    throw ValidationError("locomotion state has non-finite errors");
  for (double v : base_velocity)
    if (!finite(v)) throw ValidationError("non-finite base velocity");
  for (double v : commanded_velocity)
    if (!finite(v)) throw ValidationError("non-finite commanded velocity");
  for (double f : foot_force)
    if (!finite(f) || f < 0.0)
      throw ValidationError("foot forces must be finite and >= 0");
  for (double s : foot_speed)
    if (!finite(s) || s < 0.0)
      throw ValidationError("foot speeds must be finite and >= 0");
  for (double t : joint_torque)
    if (!finite(t)) throw ValidationError("non-finite joint torque");
  if (prev_action.size() != action.size())
    throw ValidationError("action/prev_action size mismatch");
  for (double a : action)
    if (!finite(a)) throw ValidationError("non-finite action");
  for (double a : prev_action)
    if (!finite(a)) throw ValidationError("non-finite prev_action");
}

void LocomotionWeights::validate() const {
  for (double w : {foot_force, foot_speed, upright, height, velocity, torque,
                   action_rate})
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError("locomotion weights must be finite and >= 0");
}

double LocomotionWeights::positive_sum() const {
  return foot_force + foot_speed + upright + height + velocity;
}

void LocomotionShaping::validate() const {
  for (double c : {c_upright, c_height, c_velocity, c_torque, c_action_rate})
    if (!std::isfinite(c) || c < 0.0)
      throw ValidationError("shaping constants must be finite and >= 0");
  if (!(force_scale > 0.0) || !(speed_scale > 0.0))
    throw ValidationError("shaping scales must be > 0");
}

const std::array<const char*, kNumLocomotionTerms> kLocomotionTermNames = {
    "foot_force", "foot_speed", "upright",     "height",
    "velocity",   "torque",     "action_rate",
};

LocomotionReward locomotion_reward(const LocomotionState& state,
                                   const Clock& clock,
                                   const LocomotionWeights& weights,
                                   const LocomotionShaping& shaping) {
  const double st_l = stance_indicator(clock, Leg::left);
  const double st_r = stance_indicator(clock, Leg::right);
  const double stance[2] = {st_l, st_r};

  double force_term = 0.0;
  double speed_term = 0.0;
  for (int f = 0; f < 2; ++f) {
    const double sat_force =
        std::min(state.foot_force[f] / shaping.force_scale, 1.0);
    const double still = std::max(0.0, 1.0 - state.foot_speed[f] / shaping.speed_scale);
    const double moving = std::min(state.foot_speed[f] / shaping.speed_scale, 1.0);
    force_term += stance[f] * sat_force;
    speed_term += 0.5 * (stance[f] * still + (1.0 - stance[f]) * moving);
  }

  const double upright =
      std::exp(-shaping.c_upright * state.orientation_error * state.orientation_error);
  const double height =
      std::exp(-shaping.c_height * state.height_error * state.height_error);

  const double dvx = state.base_velocity[0] - state.commanded_velocity[0];
  const double dvy = state.base_velocity[1] - state.commanded_velocity[1];
  const double velocity = std::exp(-shaping.c_velocity * (dvx * dvx + dvy * dvy));

  double tau2 = 0.0;
  for (double t : state.joint_torque) tau2 += t * t;
  const double torque = -shaping.c_torque * tau2;

  double da2 = 0.0;
  for (std::size_t i = 0; i < state.action.size(); ++i) {
    const double d = state.action[i] - state.prev_action[i];
    da2 += d * d;
  }
  const double action_rate = -shaping.c_action_rate * da2;

  LocomotionReward out;
  out.terms = {weights.foot_force * force_term, weights.foot_speed * speed_term,
               weights.upright * upright,       weights.height * height,
               weights.velocity * velocity,     weights.torque * torque,
               weights.action_rate * action_rate};
  for (double t : out.terms) out.total += t;
  return out;
}

}  // namespace walklab
