#pragma once

#include <string>
#include <vector>

#include "walklab/rewards.hpp"

namespace walklab {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  bool operator==(const Circle&) const = default;
};

// One navigation course: geometry plus the per-target-kind field parameters
// of the distance reward. A weight of exactly 0 disables that target kind
// (used by the step-in-place ablation).
struct EnvironmentLayout {
  std::vector<Circle> obstacles;
  double dest_x = 5.0;
  double dest_y = 0.0;
  double goal_radius = 0.3;
  double init_x = 0.0;
  double init_y = 0.0;
  double ws_xmin = -1.0;
  double ws_xmax = 7.0;
  double ws_ymin = -3.0;
  double ws_ymax = 3.0;

  double k_destination = 0.3;
  double k_obstacle = 1.5;
  double k_initial = 1.0;
  double w_destination = 0.95;
  double w_obstacle = -0.2;
  double w_initial = -0.5;

  // Terminal bonus granted once when the goal disk is reached. Counters the
  // incentive to hover next to a dense attractor instead of finishing.
  double goal_bonus = 0.0;

  void validate() const;

  // Distance-field sources in a fixed order: destination, obstacles (layout
  // order), initial position. Zero-weight kinds are omitted.
  std::vector<DistanceTarget> distance_targets() const;

  double workspace_extent() const;  // max side length, used as the obs scale

  bool operator==(const EnvironmentLayout&) const = default;
};

// Line-based key=value form. Canonical serialization is a fixed key order
// with shortest-round-trip numbers, so serialize(parse(serialize(x))) is
// byte-identical to serialize(x).
EnvironmentLayout parse_layout(std::string_view text);
std::string serialize_layout(const EnvironmentLayout& layout);

EnvironmentLayout load_layout(const std::string& path);
void save_layout(const EnvironmentLayout& layout, const std::string& path);

}  // namespace walklab
