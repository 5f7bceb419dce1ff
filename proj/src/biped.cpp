#include "walklab/biped.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"
#include "walklab/textio.hpp"

namespace walklab {

namespace {

// COM kinematics of one link, sparse over the coordinates it depends on.
struct Body {
  double mass = 0.0;
  double inertia = 0.0;
  int ncols = 0;
  int cols[5] = {};
  std::array<double, 2> jac[5] = {};  // d(com)/d(q[cols[i]])
  int nrots = 0;
  int rots[3] = {};                   // q indices summing to the link angle
  std::array<double, 2> a0{};         // com acceleration at qdd = 0, no gravity
};

inline std::array<double, 2> down(double a) { return {std::sin(a), -std::cos(a)}; }
inline std::array<double, 2> down_d(double a) { return {std::cos(a), std::sin(a)}; }

// Fills bodies[0] = torso, then thigh/shank per leg (left first).
void assemble_bodies(const BipedModel& m, const Vec7& q, const Vec7& qd,
                     Body out[5]) {
  const double p = q[2], wp = qd[2];

  Body& torso = out[0];
  torso.mass = m.torso_mass;
  torso.inertia = m.torso_inertia;
  const double ht = 0.5 * m.torso_length;
  torso.ncols = 3;
  torso.cols[0] = 0;
  torso.cols[1] = 1;
  torso.cols[2] = 2;
  torso.jac[0] = {1.0, 0.0};
  torso.jac[1] = {0.0, 1.0};
  torso.jac[2] = {ht * std::cos(p), -ht * std::sin(p)};  // d/dp of ht*up(p)
  torso.nrots = 1;
  torso.rots[0] = 2;
  torso.a0 = {-ht * wp * wp * std::sin(p), -ht * wp * wp * std::cos(p)};

  for (int leg = 0; leg < 2; ++leg) {
    const int h = 3 + 2 * leg;
    const double a1 = p + q[h];
    const double a2 = a1 + q[h + 1];
    const double w1 = wp + qd[h];
    const double w2 = w1 + qd[h + 1];
    const auto d1 = down(a1), d1p = down_d(a1);
    const auto d2 = down(a2), d2p = down_d(a2);
    const double lt = m.thigh_length, ls = m.shank_length;

    Body& thigh = out[1 + 2 * leg];
    thigh.mass = m.thigh_mass;
    thigh.inertia = m.thigh_inertia;
    thigh.ncols = 4;
    thigh.cols[0] = 0;
    thigh.cols[1] = 1;
    thigh.cols[2] = 2;
    thigh.cols[3] = h;
    thigh.jac[0] = {1.0, 0.0};
    thigh.jac[1] = {0.0, 1.0};
    thigh.jac[2] = {0.5 * lt * d1p[0], 0.5 * lt * d1p[1]};
    thigh.jac[3] = thigh.jac[2];
    thigh.nrots = 2;
    thigh.rots[0] = 2;
    thigh.rots[1] = h;
    thigh.a0 = {-0.5 * lt * w1 * w1 * d1[0], -0.5 * lt * w1 * w1 * d1[1]};

    Body& shank = out[2 + 2 * leg];
    shank.mass = m.shank_mass;
    shank.inertia = m.shank_inertia;
    shank.ncols = 5;
    shank.cols[0] = 0;
    shank.cols[1] = 1;
    shank.cols[2] = 2;
    shank.cols[3] = h;
    shank.cols[4] = h + 1;
    shank.jac[0] = {1.0, 0.0};
    shank.jac[1] = {0.0, 1.0};
    shank.jac[2] = {lt * d1p[0] + 0.5 * ls * d2p[0],
                    lt * d1p[1] + 0.5 * ls * d2p[1]};
    shank.jac[3] = shank.jac[2];
    shank.jac[4] = {0.5 * ls * d2p[0], 0.5 * ls * d2p[1]};
    shank.nrots = 3;
    shank.rots[0] = 2;
    shank.rots[1] = h;
    shank.rots[2] = h + 1;
    shank.a0 = {-lt * w1 * w1 * d1[0] - 0.5 * ls * w2 * w2 * d2[0],
                -lt * w1 * w1 * d1[1] - 0.5 * ls * w2 * w2 * d2[1]};
  }
}

// Foot point Jacobian (2 x 7), sparse like the shank's.
struct FootJac {
  int cols[5];
  std::array<double, 2> jac[5];
};

FootJac foot_jacobian(const BipedModel& m, const Vec7& q, Leg leg) {
  const int h = 3 + 2 * static_cast<int>(leg);
  const double a1 = q[2] + q[h];
  const double a2 = a1 + q[h + 1];
  const auto d1p = down_d(a1), d2p = down_d(a2);
  const double lt = m.thigh_length, ls = m.shank_length;
  FootJac f;
  f.cols[0] = 0;
  f.cols[1] = 1;
  f.cols[2] = 2;
  f.cols[3] = h;
  f.cols[4] = h + 1;
  f.jac[0] = {1.0, 0.0};
  f.jac[1] = {0.0, 1.0};
  f.jac[2] = {lt * d1p[0] + ls * d2p[0], lt * d1p[1] + ls * d2p[1]};
  f.jac[3] = f.jac[2];
  f.jac[4] = {ls * d2p[0], ls * d2p[1]};
  return f;
}

double leg_drop(const BipedModel& m, double hip, double knee) {
  return m.thigh_length * std::cos(hip) + m.shank_length * std::cos(hip + knee);
}

// One-sided normal spring-damper plus stick-slip tangential friction: a
// spring back to the anchor point where the foot stuck, Coulomb-capped by
// mu*f_n. While the cap binds the anchor is dragged to the slip boundary, so
// a stationary loaded foot can hold force but sustained overload slides.
FootContact foot_contact(const BipedModel& m, const std::array<double, 2>& pos,
                         const std::array<double, 2>& vel, double& anchor,
                         bool& anchored) {
  FootContact c;
  if (pos[1] >= 0.0) {
    anchored = false;
    return c;
  }
  if (!anchored) {
    anchored = true;
    anchor = pos[0];
  }
  c.normal = std::max(0.0, -m.ground_k * pos[1] - m.ground_c * vel[1]);
  const double cap = m.friction_mu * c.normal;
  const double want = -m.tangent_k * (pos[0] - anchor) - m.ground_c * vel[0];
  c.tangent = std::clamp(want, -cap, cap);
  if (c.tangent != want)
    anchor = pos[0] + (c.tangent + m.ground_c * vel[0]) / m.tangent_k;
  return c;
}

}  // namespace

void BipedModel::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!pos(torso_length) || !pos(thigh_length) || !pos(shank_length))
    throw ValidationError("link lengths must be > 0");
  if (!pos(torso_mass) || !pos(thigh_mass) || !pos(shank_mass))
    throw ValidationError("link masses must be > 0");
  if (!pos(torso_inertia) || !pos(thigh_inertia) || !pos(shank_inertia))
    throw ValidationError("link inertias must be > 0");
  if (!nonneg(kp) || !nonneg(kd))
    throw ValidationError("PD gains must be >= 0");
  if (!pos(torque_max) || !pos(action_range))
    throw ValidationError("torque limit and action range must be > 0");
  if (!pos(ground_k) || !nonneg(ground_c) || !pos(tangent_k) ||
      !nonneg(friction_mu))
    throw ValidationError("contact parameters out of range");
  if (!pos(dt) || substeps < 1)
    throw ValidationError("integration parameters out of range");
  for (double v : posture)
    if (!std::isfinite(v)) throw ValidationError("posture must be finite");
  const double dl = leg_drop(*this, posture[0], posture[1]);
  const double dr = leg_drop(*this, posture[2], posture[3]);
  if (!(dl > 0.0) || !(dr > 0.0))
    throw ValidationError("default posture must keep the feet below the base");
  if (std::abs(dl - dr) > 1e-9)
    throw ValidationError("default posture feet are not level");
}

double BipedModel::total_mass() const {
  return torso_mass + 2.0 * (thigh_mass + shank_mass);
}

double BipedModel::standing_height() const {
  return leg_drop(*this, posture[0], posture[1]);
}

bool BipedState::all_finite() const {
  for (double v : q)
    if (!std::isfinite(v)) return false;
  for (double v : qd)
    if (!std::isfinite(v)) return false;
  return true;
}

std::array<double, 2> biped_foot_pos(const BipedModel& m, const Vec7& q, Leg leg) {
  const int h = 3 + 2 * static_cast<int>(leg);
  const double a1 = q[2] + q[h];
  const double a2 = a1 + q[h + 1];
  const auto d1 = down(a1), d2 = down(a2);
  return {q[0] + m.thigh_length * d1[0] + m.shank_length * d2[0],
          q[1] + m.thigh_length * d1[1] + m.shank_length * d2[1]};
}

std::array<double, 2> biped_foot_vel(const BipedModel& m, const Vec7& q,
                                     const Vec7& qd, Leg leg) {
  const int h = 3 + 2 * static_cast<int>(leg);
  const double a1 = q[2] + q[h];
  const double a2 = a1 + q[h + 1];
  const double w1 = qd[2] + qd[h];
  const double w2 = w1 + qd[h + 1];
  const auto d1p = down_d(a1), d2p = down_d(a2);
  return {qd[0] + m.thigh_length * w1 * d1p[0] + m.shank_length * w2 * d2p[0],
          qd[1] + m.thigh_length * w1 * d1p[1] + m.shank_length * w2 * d2p[1]};
}

std::array<double, 2> biped_com(const BipedModel& m, const Vec7& q) {
  double cx = 0.0, cz = 0.0;
  const double p = q[2];
  const double ht = 0.5 * m.torso_length;
  cx += m.torso_mass * (q[0] + ht * std::sin(p));
  cz += m.torso_mass * (q[1] + ht * std::cos(p));
  for (int leg = 0; leg < 2; ++leg) {
    const int h = 3 + 2 * leg;
    const double a1 = p + q[h];
    const double a2 = a1 + q[h + 1];
    const auto d1 = down(a1), d2 = down(a2);
    cx += m.thigh_mass * (q[0] + 0.5 * m.thigh_length * d1[0]);
    cz += m.thigh_mass * (q[1] + 0.5 * m.thigh_length * d1[1]);
    cx += m.shank_mass *
          (q[0] + m.thigh_length * d1[0] + 0.5 * m.shank_length * d2[0]);
    cz += m.shank_mass *
          (q[1] + m.thigh_length * d1[1] + 0.5 * m.shank_length * d2[1]);
  }
  const double mt = m.total_mass();
  return {cx / mt, cz / mt};
}

std::array<double, 2> biped_com_vel(const BipedModel& m, const Vec7& q,
                                    const Vec7& qd) {
  Body bodies[5];
  assemble_bodies(m, q, qd, bodies);
  double vx = 0.0, vz = 0.0;
  for (const Body& b : bodies) {
    for (int i = 0; i < b.ncols; ++i) {
      vx += b.mass * b.jac[i][0] * qd[b.cols[i]];
      vz += b.mass * b.jac[i][1] * qd[b.cols[i]];
    }
  }
  const double mt = m.total_mass();
  return {vx / mt, vz / mt};
}

Mat7 biped_mass_matrix(const BipedModel& m, const Vec7& q) {
  Body bodies[5];
  assemble_bodies(m, q, Vec7{}, bodies);
  Mat7 mm{};
  for (const Body& b : bodies) {
    for (int i = 0; i < b.ncols; ++i)
      for (int j = 0; j < b.ncols; ++j)
        mm[b.cols[i]][b.cols[j]] +=
            b.mass * (b.jac[i][0] * b.jac[j][0] + b.jac[i][1] * b.jac[j][1]);
    for (int i = 0; i < b.nrots; ++i)
      for (int j = 0; j < b.nrots; ++j) mm[b.rots[i]][b.rots[j]] += b.inertia;
  }
  return mm;
}

Vec7 biped_bias(const BipedModel& m, const Vec7& q, const Vec7& qd) {
  Body bodies[5];
  assemble_bodies(m, q, qd, bodies);
  Vec7 h{};
  for (const Body& b : bodies) {
    const double fx = b.mass * b.a0[0];
    const double fz = b.mass * (b.a0[1] + kGravity);
    for (int i = 0; i < b.ncols; ++i)
      h[b.cols[i]] += b.jac[i][0] * fx + b.jac[i][1] * fz;
  }
  return h;
}

double biped_energy(const BipedModel& m, const Vec7& q, const Vec7& qd) {
  const Mat7 mm = biped_mass_matrix(m, q);
  double t = 0.0;
  for (int i = 0; i < kBipedDof; ++i)
    for (int j = 0; j < kBipedDof; ++j) t += qd[i] * mm[i][j] * qd[j];
  t *= 0.5;

  const double p = q[2];
  double v = m.torso_mass * (q[1] + 0.5 * m.torso_length * std::cos(p));
  for (int leg = 0; leg < 2; ++leg) {
    const int h = 3 + 2 * leg;
    const double a1 = p + q[h];
    const double a2 = a1 + q[h + 1];
    v += m.thigh_mass * (q[1] - 0.5 * m.thigh_length * std::cos(a1));
    v += m.shank_mass * (q[1] - m.thigh_length * std::cos(a1) -
                         0.5 * m.shank_length * std::cos(a2));
  }
  return t + kGravity * v;
}

Vec7 solve_spd(const Mat7& a, const Vec7& b) {
  Mat7 l{};
  for (int j = 0; j < kBipedDof; ++j) {
    double d = a[j][j];
    for (int k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!(d > 0.0)) throw DivergenceError("matrix not positive definite");
    l[j][j] = std::sqrt(d);
    for (int i = j + 1; i < kBipedDof; ++i) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  Vec7 y{};
  for (int i = 0; i < kBipedDof; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  Vec7 x{};
  for (int i = kBipedDof - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < kBipedDof; ++k) s -= l[k][i] * x[k];
    x[i] = s / l[i][i];
  }
  return x;
}

Joints pd_torque(const BipedModel& m, const Joints& target, const Vec7& q,
                 const Vec7& qd) {
  Joints tau{};
  for (int j = 0; j < kBipedJoints; ++j) {
    const double raw = m.kp * (target[j] - q[3 + j]) - m.kd * qd[3 + j];
    tau[j] = std::clamp(raw, -m.torque_max, m.torque_max);
  }
  return tau;
}

std::array<FootContact, 2> biped_substep(const BipedModel& m, BipedState& state,
                                         const Joints& torque) {
  const Mat7 mm = biped_mass_matrix(m, state.q);
  const Vec7 bias = biped_bias(m, state.q, state.qd);
  Vec7 rhs{};
  for (int i = 0; i < kBipedDof; ++i) rhs[i] = -bias[i];
  for (int j = 0; j < kBipedJoints; ++j) rhs[3 + j] += torque[j];

  std::array<FootContact, 2> contacts{};
  for (int leg = 0; leg < 2; ++leg) {
    const Leg l = static_cast<Leg>(leg);
    const auto pos = biped_foot_pos(m, state.q, l);
    const auto vel = biped_foot_vel(m, state.q, state.qd, l);
    const FootContact c =
        foot_contact(m, pos, vel, state.anchor[leg], state.anchored[leg]);
    contacts[leg] = c;
    if (c.normal != 0.0 || c.tangent != 0.0) {
      const FootJac fj = foot_jacobian(m, state.q, l);
      for (int i = 0; i < 5; ++i)
        rhs[fj.cols[i]] += fj.jac[i][0] * c.tangent + fj.jac[i][1] * c.normal;
    }
  }

  const Vec7 qdd = solve_spd(mm, rhs);
  for (int i = 0; i < kBipedDof; ++i) {
    state.qd[i] += qdd[i] * m.dt;
    state.q[i] += state.qd[i] * m.dt;
  }
  state.contact = contacts;
  return contacts;
}

BipedModel parse_biped_model(std::string_view text) {
  BipedModel m;
  auto tuple = [](const KeyValueLine& kv, std::size_t n) {
    std::vector<std::string_view> parts = split(kv.value, ',');
    if (parts.size() != n)
      throw ValidationError("line " + std::to_string(kv.line_no) + ": '" +
                            kv.key + "' needs " + std::to_string(n) +
                            " comma-separated values");
    std::vector<double> out;
    for (auto p : parts) out.push_back(parse_double(p));
    return out;
  };
  for (const KeyValueLine& kv : parse_key_values(text)) {
    if (kv.key == "torso") {
      auto v = tuple(kv, 3);
      m.torso_length = v[0];
      m.torso_mass = v[1];
      m.torso_inertia = v[2];
    } else if (kv.key == "thigh") {
      auto v = tuple(kv, 3);
      m.thigh_length = v[0];
      m.thigh_mass = v[1];
      m.thigh_inertia = v[2];
    } else if (kv.key == "shank") {
      auto v = tuple(kv, 3);
      m.shank_length = v[0];
      m.shank_mass = v[1];
      m.shank_inertia = v[2];
    } else if (kv.key == "pd") {
      auto v = tuple(kv, 4);
      m.kp = v[0];
      m.kd = v[1];
      m.torque_max = v[2];
      m.action_range = v[3];
    } else if (kv.key == "contact") {
      auto v = tuple(kv, 4);
      m.ground_k = v[0];
      m.ground_c = v[1];
      m.tangent_k = v[2];
      m.friction_mu = v[3];
    } else if (kv.key == "posture") {
      auto v = tuple(kv, 4);
      for (int j = 0; j < kBipedJoints; ++j) m.posture[j] = v[j];
    } else if (kv.key == "dt") {
      m.dt = parse_double(kv.value);
    } else if (kv.key == "substeps") {
      m.substeps = static_cast<int>(parse_int(kv.value));
    } else {
      throw ValidationError("line " + std::to_string(kv.line_no) +
                            ": unknown model key '" + kv.key + "'");
    }
  }
  m.validate();
  return m;
}

std::string serialize_biped_model(const BipedModel& m) {
  std::string s;
  auto kv = [&s](std::string_view key, std::initializer_list<double> vals) {
    s += key;
    s += " = ";
    bool first = true;
    for (double v : vals) {
      if (!first) s += ",";
      s += format_double(v);
      first = false;
    }
    s += "\n";
  };
  kv("torso", {m.torso_length, m.torso_mass, m.torso_inertia});
  kv("thigh", {m.thigh_length, m.thigh_mass, m.thigh_inertia});
  kv("shank", {m.shank_length, m.shank_mass, m.shank_inertia});
  kv("pd", {m.kp, m.kd, m.torque_max, m.action_range});
  kv("contact", {m.ground_k, m.ground_c, m.tangent_k, m.friction_mu});
  kv("posture", {m.posture[0], m.posture[1], m.posture[2], m.posture[3]});
  kv("dt", {m.dt});
  s += "substeps = " + std::to_string(m.substeps) + "\n";
  return s;
}

BipedModel load_biped_model(const std::string& path) {
  try {
    return parse_biped_model(read_text_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace walklab
