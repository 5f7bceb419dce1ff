#pragma once

#include <string>
#include <vector>

#include "walklab/checkpoint.hpp"
#include "walklab/env.hpp"
#include "walklab/layout.hpp"
#include "walklab/metrics.hpp"

namespace walklab {

// Aggregate over N seeded evaluation episodes. Rates partition: success +
// collision + fall + timeout == 1 (a diverged episode counts as a fall).
struct EvalReport {
  int episodes = 0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double fall_rate = 0.0;
  double timeout_rate = 0.0;
  double mean_return = 0.0;
  double mean_length = 0.0;
  double mean_final_dist = 0.0;   // distance to goal at episode end
  double mean_step_length = 0.0;  // NaN for envs without a step_length diagnostic
  double mean_displacement = 0.0; // straight-line base travel, start to end
};

// Runs the checkpointed policy in `env` for `episodes` episodes.
// `deterministic` uses the Gaussian mean action; otherwise actions are
// sampled. Episode streams derive from (checkpoint master seed, salt,
// episode index), so reports are reproducible and disjoint from training.
EvalReport evaluate(const Checkpoint& cp, Environment& env, int episodes,
                    bool deterministic, uint64_t salt = 0);

// One (target, axis, offset) cell of the displacement study. Cells whose
// displaced layout is invalid (target outside the workspace, obstacle
// overlapping start or goal) are marked invalid and never run.
struct RobustnessCell {
  std::string target;  // "destination" or "obstacle0", "obstacle1", ...
  std::string axis;    // "x" or "y"
  double offset = 0.0;
  bool valid = false;
  EvalReport report;
};

struct RobustnessResult {
  std::vector<RobustnessCell> cells;
};

// Inclusive offset grid "lo:step:hi" with step > 0 and lo <= hi.
std::vector<double> parse_grid(std::string_view spec);

// Displaces the destination and each obstacle in turn along x and y by every
// grid offset and evaluates each valid displaced layout. All cells share
// salt 0, so a zero-offset cell reproduces evaluate() on the base layout.
RobustnessResult robustness_sweep(const Checkpoint& cp,
                                  const EnvironmentLayout& base,
                                  const std::vector<double>& offsets,
                                  int episodes, bool deterministic);

// CSV with header target,axis,offset,success,collision,timeout,mean_return;
// invalid cells keep their identifying fields and leave the stats empty.
std::string robustness_csv(const RobustnessResult& result);

// Downsampled learning curves: one "x y" line per point, at most 200 points,
// each the bucket mean of a contiguous run of rows. Requires env_steps,
// mean_return and mean_length columns.
struct PlotData {
  std::string return_vs_steps;
  std::string length_vs_steps;
};

PlotData plot_data(const MetricsTable& metrics);

}  // namespace walklab
