#include "walklab/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "walklab/error.hpp"
#include "walklab/rng.hpp"

using namespace walklab;

namespace {

DistanceTarget make_target(double x, double y, double k, double w, TargetKind kind) {
  DistanceTarget t;
  t.x = x;
  t.y = y;
  t.k = k;
  t.weight = w;
  t.kind = kind;
  return t;
}

}  // namespace

TEST_SUITE("rewards") {

TEST_CASE("distance term spot values") {
  auto t = make_target(0.0, 0.0, 1.0, 1.0, TargetKind::destination);
  CHECK(distance_term(0.0, 0.0, t) == 1.0);
  CHECK(distance_term(1.0, 0.0, t) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-15));
  t.k = 0.2;
  CHECK(distance_term(3.0, 4.0, t) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-15));
  t.k = 7.3;
  CHECK(distance_term(0.0, 0.0, t) == 1.0);
}

TEST_CASE("distance reward weight anchors") {
  DistanceTarget dest = make_target(2.0, -1.0, 0.3, 0.95, TargetKind::destination);
  auto r1 = distance_reward(2.0, -1.0, std::span<const DistanceTarget>(&dest, 1));
  CHECK(r1.total == doctest::Approx(0.95).epsilon(1e-15));

  DistanceTarget obs = make_target(0.5, 0.5, 1.5, -0.2, TargetKind::obstacle);
  auto r2 = distance_reward(0.5, 0.5, std::span<const DistanceTarget>(&obs, 1));
  CHECK(r2.total == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("composite three-target value") {
  // base (0,0); destination (5,0) k=0.5 w=+0.95; obstacle (2,1) k=1 w=-0.2;
  // initial (0,0) k=1 w=-0.5. Expected value frozen from an independent
  // scalar evaluation.
  std::vector<DistanceTarget> ts = {
      make_target(5.0, 0.0, 0.5, 0.95, TargetKind::destination),
      make_target(2.0, 1.0, 1.0, -0.2, TargetKind::obstacle),
      make_target(0.0, 0.0, 1.0, -0.5, TargetKind::initial_position),
  };
  auto r = distance_reward(0.0, 0.0, ts);
  CHECK(r.total == doctest::Approx(-0.4433948364393733).epsilon(1e-14));
  CHECK(r.per_target.size() == 3);
  CHECK(r.per_target[0] == doctest::Approx(0.07798074869270386).epsilon(1e-14));
  CHECK(r.per_target[1] == doctest::Approx(-0.02137558513207715).epsilon(1e-14));
  CHECK(r.per_target[2] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(r.total ==
        doctest::Approx(r.per_target[0] + r.per_target[1] + r.per_target[2])
            .epsilon(1e-15));
}

TEST_CASE("distance reward matches independent scalar evaluation") {
  SplitRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<DistanceTarget> ts;
    const int nobs = static_cast<int>(rng.next_u64() % 4);
    ts.push_back(make_target(rng.uniform(-5, 5), rng.uniform(-5, 5),
                             rng.uniform(0.1, 2.0), rng.uniform(0.1, 1.0),
                             TargetKind::destination));
    for (int i = 0; i < nobs; ++i)
      ts.push_back(make_target(rng.uniform(-5, 5), rng.uniform(-5, 5),
                               rng.uniform(0.1, 2.0), -rng.uniform(0.1, 1.0),
                               TargetKind::obstacle));
    ts.push_back(make_target(rng.uniform(-5, 5), rng.uniform(-5, 5),
                             rng.uniform(0.1, 2.0), -rng.uniform(0.1, 1.0),
                             TargetKind::initial_position));
    const double bx = rng.uniform(-5, 5);
    const double by = rng.uniform(-5, 5);

    double expect = 0.0;
    for (const auto& t : ts)
      expect += t.weight * std::exp(-t.k * std::hypot(bx - t.x, by - t.y));
    auto r = distance_reward(bx, by, ts);
    CHECK(r.total == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("distance term strictly decreases with distance") {
  SplitRng rng(7);
  auto t = make_target(0.0, 0.0, 0.7, 1.0, TargetKind::destination);
  std::vector<double> ds;
  for (int i = 0; i < 200; ++i) ds.push_back(rng.uniform(0.0, 10.0));
  std::sort(ds.begin(), ds.end());
  for (std::size_t i = 1; i < ds.size(); ++i) {
    if (ds[i] == ds[i - 1]) continue;
    CHECK(distance_term(ds[i], 0.0, t) < distance_term(ds[i - 1], 0.0, t));
  }
}

TEST_CASE("attract and repel slopes along radial rays") {
  DistanceTarget dest = make_target(0.0, 0.0, 0.3, 0.95, TargetKind::destination);
  DistanceTarget obs = make_target(0.0, 0.0, 1.5, -0.2, TargetKind::obstacle);
  const double h = 1e-6;
  for (double d = 0.2; d < 6.0; d += 0.37) {
    auto at = [&](const DistanceTarget& t, double x) {
      return distance_reward(x, 0.0, std::span<const DistanceTarget>(&t, 1)).total;
    };
    CHECK((at(dest, d + h) - at(dest, d - h)) / (2 * h) < 0.0);
    CHECK((at(obs, d + h) - at(obs, d - h)) / (2 * h) > 0.0);
  }
}

TEST_CASE("boundedness by summed absolute weights") {
  SplitRng rng(99);
  std::vector<DistanceTarget> ts = {
      make_target(1.0, 2.0, 0.3, 0.95, TargetKind::destination),
      make_target(-1.0, 0.0, 1.5, -0.2, TargetKind::obstacle),
      make_target(3.0, 3.0, 1.5, -0.2, TargetKind::obstacle),
      make_target(0.0, 0.0, 1.0, -0.5, TargetKind::initial_position),
  };
  double wsum = 0.0;
  for (const auto& t : ts) wsum += std::abs(t.weight);
  for (int i = 0; i < 500; ++i) {
    auto r = distance_reward(rng.uniform(-10, 10), rng.uniform(-10, 10), ts);
    CHECK(std::abs(r.total) <= wsum + 1e-12);
  }
}

TEST_CASE("argmax unchanged by common positive weight scale") {
  SplitRng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DistanceTarget> ts = {
        make_target(rng.uniform(-3, 3), rng.uniform(-3, 3), 0.3, 0.95,
                    TargetKind::destination),
        make_target(rng.uniform(-3, 3), rng.uniform(-3, 3), 1.5, -0.2,
                    TargetKind::obstacle),
        make_target(rng.uniform(-3, 3), rng.uniform(-3, 3), 1.0, -0.5,
                    TargetKind::initial_position),
    };
    std::vector<DistanceTarget> scaled = ts;
    const double c = rng.uniform(0.1, 10.0);
    for (auto& t : scaled) t.weight *= c;
    const double ax = rng.uniform(-3, 3), ay = rng.uniform(-3, 3);
    const double bx = rng.uniform(-3, 3), by = rng.uniform(-3, 3);
    const double da =
        distance_reward(ax, ay, ts).total - distance_reward(bx, by, ts).total;
    const double ds = distance_reward(ax, ay, scaled).total -
                      distance_reward(bx, by, scaled).total;
    if (std::abs(da) > 1e-9) CHECK(da * ds > 0.0);
  }
}

TEST_CASE("target validation enforces sign structure") {
  CHECK_THROWS_AS(
      make_target(0, 0, 0.0, 1.0, TargetKind::destination).validate(),
      ValidationError);
  CHECK_THROWS_AS(
      make_target(0, 0, 1.0, -0.1, TargetKind::destination).validate(),
      ValidationError);
  CHECK_THROWS_AS(make_target(0, 0, 1.0, 0.1, TargetKind::obstacle).validate(),
                  ValidationError);
  CHECK_NOTHROW(
      make_target(0, 0, 1.0, -0.1, TargetKind::initial_position).validate());
}

TEST_CASE("perfect locomotion state scores the positive weight sum") {
  Clock clock;
  clock.phase = 0.25;  // left mid-stance, right mid-swing
  LocomotionWeights w;
  LocomotionShaping sh;
  LocomotionState s;
  s.base_velocity = {0.4, 0.0};
  s.commanded_velocity = {0.4, 0.0};
  s.foot_force = {sh.force_scale, 0.0};
  s.foot_speed = {0.0, sh.speed_scale};
  s.joint_torque = {0.0, 0.0, 0.0, 0.0};
  s.prev_action = {0.1, 0.2};
  s.action = {0.1, 0.2};
  auto r = locomotion_reward(s, clock, w, sh);
  CHECK(r.total == doctest::Approx(w.positive_sum()).epsilon(1e-15));
  CHECK(r.terms[5] == 0.0);
  CHECK(r.terms[6] == 0.0);
}

TEST_CASE("no stance force zeroes the foot-force term") {
  Clock clock;
  clock.phase = 0.25;
  LocomotionWeights w;
  LocomotionShaping sh;
  LocomotionState s;
  s.prev_action = {0.0};
  s.action = {0.0};
  s.foot_force = {0.0, 0.0};
  auto r = locomotion_reward(s, clock, w, sh);
  CHECK(r.terms[0] == 0.0);
}

TEST_CASE("randomized state matches straight-line recomputation") {
  SplitRng rng(555);
  LocomotionWeights w;
  LocomotionShaping sh;
  for (int trial = 0; trial < 300; ++trial) {
    Clock clock;
    clock.phase = rng.uniform();
    LocomotionState s;
    s.orientation_error = rng.uniform(-1, 1);
    s.height_error = rng.uniform(-0.3, 0.3);
    s.base_velocity = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.commanded_velocity = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.foot_force = {rng.uniform(0, 400), rng.uniform(0, 400)};
    s.foot_speed = {rng.uniform(0, 1), rng.uniform(0, 1)};
    s.joint_torque = {rng.uniform(-60, 60), rng.uniform(-60, 60),
                      rng.uniform(-60, 60), rng.uniform(-60, 60)};
    s.prev_action = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.action = {rng.uniform(-1, 1), rng.uniform(-1, 1)};

    const double stl = stance_indicator(clock, Leg::left);
    const double str = stance_indicator(clock, Leg::right);
    double expect = 0.0;
    expect += w.foot_force * (stl * std::min(s.foot_force[0] / sh.force_scale, 1.0) +
                              str * std::min(s.foot_force[1] / sh.force_scale, 1.0));
    auto still = [&](double sp) { return std::max(0.0, 1.0 - sp / sh.speed_scale); };
    auto moving = [&](double sp) { return std::min(sp / sh.speed_scale, 1.0); };
    expect += w.foot_speed * 0.5 *
              (stl * still(s.foot_speed[0]) + (1 - stl) * moving(s.foot_speed[0]) +
               str * still(s.foot_speed[1]) + (1 - str) * moving(s.foot_speed[1]));
    expect += w.upright * std::exp(-sh.c_upright * s.orientation_error *
                                   s.orientation_error);
    expect += w.height * std::exp(-sh.c_height * s.height_error * s.height_error);
    const double evx = s.base_velocity[0] - s.commanded_velocity[0];
    const double evy = s.base_velocity[1] - s.commanded_velocity[1];
    expect += w.velocity * std::exp(-sh.c_velocity * (evx * evx + evy * evy));
    double t2 = 0;
    for (double t : s.joint_torque) t2 += t * t;
    expect += w.torque * (-sh.c_torque * t2);
    double a2 = 0;
    for (int i = 0; i < 2; ++i) {
      const double d = s.action[i] - s.prev_action[i];
      a2 += d * d;
    }
    expect += w.action_rate * (-sh.c_action_rate * a2);

    auto r = locomotion_reward(s, clock, w, sh);
    CHECK(r.total == doctest::Approx(expect).epsilon(1e-12));
    double termsum = 0.0;
    for (double t : r.terms) termsum += t;
    CHECK(r.total == doctest::Approx(termsum).epsilon(1e-12));
    // positive terms bounded by the positive weight sum
    double pos = 0.0;
    for (int i = 0; i < 5; ++i) pos += r.terms[i];
    CHECK(pos <= w.positive_sum() + 1e-12);
  }
}

TEST_CASE("total reward is plain addition") {
  CHECK(total_reward(0.0, 0.0) == 0.0);
  CHECK(total_reward(1.0, 0.95) == doctest::Approx(1.95).epsilon(1e-15));
}

TEST_CASE("target labels") {
  CHECK(target_label(make_target(0, 0, 1, 1, TargetKind::destination), 0) ==
        "destination");
  CHECK(target_label(make_target(0, 0, 1, -1, TargetKind::obstacle), 2) ==
        "obstacle2");
  CHECK(target_label(make_target(0, 0, 1, -1, TargetKind::initial_position), 3) ==
        "initial");
}

}  // TEST_SUITE
