#pragma once

#include <string>

#include "walklab/checkpoint.hpp"
#include "walklab/config.hpp"

namespace walklab {

struct TrainResult {
  Checkpoint checkpoint;        // final state (last good one on divergence)
  std::string checkpoint_path;  // out_dir/final.wlck
  std::string metrics_path;     // out_dir/metrics.csv
  bool diverged = false;
};

// Alternates rollout collection and PPO updates until the next full horizon
// would exceed cfg.total_steps. Writes one metrics row per update, periodic
// checkpoints every cfg.checkpoint_every updates, and a final checkpoint.
// With `resume_path` set, continues from that checkpoint after verifying it
// describes the same experiment; continuation is bit-identical to an
// uninterrupted run because every stochastic stream is re-derived from
// (master seed, update index, worker index, role).
// On divergence the pre-update state is saved and `diverged` is set; the
// caller maps that to exit code 2.
TrainResult train(const ExperimentConfig& cfg,
                  const std::string& resume_path = "");

}  // namespace walklab
