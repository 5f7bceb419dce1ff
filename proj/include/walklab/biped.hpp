#pragma once

#include <array>
#include <string>
#include <string_view>

#include "walklab/gaitclock.hpp"

namespace walklab {

// Generalized coordinates: base x, base z, pitch, left hip, left knee,
// right hip, right knee. Hips and knees are actuated; the base is not.
inline constexpr int kBipedDof = 7;
inline constexpr int kBipedJoints = 4;
inline constexpr double kGravity = 9.81;

using Vec7 = std::array<double, kBipedDof>;
using Mat7 = std::array<Vec7, kBipedDof>;
using Joints = std::array<double, kBipedJoints>;  // hipL, kneeL, hipR, kneeR

// Planar 5-link chain: torso up from the base point, one thigh+shank pair
// per leg down from it, point feet. Positive pitch leans the torso forward
// (+x); positive hip swings the leg forward; knee angles bend backward
// (negative at the crouch).
struct BipedModel {
  double torso_length = 0.6;
  double torso_mass = 30.0;
  double torso_inertia = 0.9;     // ~ m*l^2/12
  double thigh_length = 0.4;
  double thigh_mass = 5.0;
  double thigh_inertia = 0.0667;  // ~ m*l^2/12
  double shank_length = 0.4;
  double shank_mass = 3.0;
  double shank_inertia = 0.04;    // ~ m*l^2/12

  // Sized so the staggered stance's static joint torques (tens of N*m at
  // the loaded knee) sag the posture by well under 0.1 rad.
  double kp = 400.0;          // N*m/rad, per joint
  double kd = 20.0;           // N*m*s/rad
  double torque_max = 60.0;   // N*m clamp
  double action_range = 0.6;  // rad of target offset per unit action

  double ground_k = 2e4;      // N/m normal stiffness
  double ground_c = 200.0;    // N*s/m normal damping
  double tangent_k = 8000.0;  // N/m tangential anchor-spring stiffness
  double friction_mu = 0.8;

  // Crouched stance the action offsets are measured from. Staggered so the
  // feet straddle the base while both touch the ground; thigh and shank
  // lengths match, so swapping the hip angles keeps the drops exactly equal.
  Joints posture{0.4, -0.45, 0.05, -0.45};

  double dt = 1e-3;  // physics substep, seconds
  int substeps = 20; // substeps per control step (50 Hz control)

  // Positivity checks plus a numerical one: at the default posture with the
  // torso upright, both feet sit at the same height (the ground).
  void validate() const;

  double total_mass() const;
  // Base height when standing at the default posture with feet on z = 0.
  double standing_height() const;
};

BipedModel parse_biped_model(std::string_view text);
std::string serialize_biped_model(const BipedModel& model);
BipedModel load_biped_model(const std::string& path);

struct FootContact {
  double normal = 0.0;   // N, >= 0
  double tangent = 0.0;  // N, |tangent| <= mu * normal
};

struct BipedState {
  Vec7 q{};
  Vec7 qd{};
  std::array<FootContact, 2> contact{};  // {left, right}, last substep
  // Tangential friction anchors: where each foot stuck to the ground.
  // Dragged along when the Coulomb cap forces a slip, cleared on lift-off.
  std::array<double, 2> anchor{};
  std::array<bool, 2> anchored{};
  int step_count = 0;
  Joints prev_action{};

  bool all_finite() const;
};

// Position kinematics.
std::array<double, 2> biped_foot_pos(const BipedModel& m, const Vec7& q, Leg leg);
std::array<double, 2> biped_foot_vel(const BipedModel& m, const Vec7& q,
                                     const Vec7& qd, Leg leg);
std::array<double, 2> biped_com(const BipedModel& m, const Vec7& q);
std::array<double, 2> biped_com_vel(const BipedModel& m, const Vec7& q,
                                    const Vec7& qd);

// Dynamics pieces, exposed so the physics can be audited term by term.
Mat7 biped_mass_matrix(const BipedModel& m, const Vec7& q);
// Coriolis/centrifugal plus gravity: the motion equation is
// M(q) qdd = tau_gen + J_c^T f_c - bias(q, qd).
Vec7 biped_bias(const BipedModel& m, const Vec7& q, const Vec7& qd);
// Kinetic + gravitational potential energy (contact springs excluded).
double biped_energy(const BipedModel& m, const Vec7& q, const Vec7& qd);

// Cholesky solve for the SPD mass matrix.
Vec7 solve_spd(const Mat7& a, const Vec7& b);

// tau_j = clamp(kp*(target_j - q_j) - kd*qd_j, +-torque_max).
Joints pd_torque(const BipedModel& m, const Joints& target, const Vec7& q,
                 const Vec7& qd);

// One semi-implicit Euler substep under fixed joint torques; updates
// state.q/qd/contact and returns the contact forces used.
std::array<FootContact, 2> biped_substep(const BipedModel& m, BipedState& state,
                                         const Joints& torque);

}  // namespace walklab
