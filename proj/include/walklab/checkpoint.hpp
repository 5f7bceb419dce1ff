#pragma once

#include <cstdint>
#include <string>

#include "walklab/adam.hpp"
#include "walklab/config.hpp"
#include "walklab/env.hpp"
#include "walklab/policy.hpp"
#include "walklab/ppo.hpp"

namespace walklab {

// Everything needed to continue or evaluate a run: the experiment config and
// resolved layout/model echoed as canonical text, the observation schema the
// policy was trained against, both networks, and all optimizer state. The
// binary form is versioned, shape-explicit, and little-endian; saving a
// loaded checkpoint reproduces the file byte for byte.
struct Checkpoint {
  std::string config_text;
  std::string layout_text;
  std::string model_text;  // empty unless env == biped
  ObservationLayout obs_layout;
  GaussianPolicy policy;
  ValueNet critic;
  AdamState actor_adam;
  AdamVecState log_std_adam;
  AdamState critic_adam;
  uint64_t master_seed = 0;
  int64_t update_index = 0;  // updates completed
  int64_t env_steps = 0;

  ExperimentConfig config() const;  // parsed from config_text
};

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Plain-text export of every field and parameter, for diffing.
std::string checkpoint_text_dump(const Checkpoint& cp);

// Rejects evaluation against an environment whose observation schema or
// action dimension differs from what the policy was trained on.
void verify_compatible(const Checkpoint& cp, const Environment& env);

// Environment for evaluating this checkpoint on `layout`. Uses the echoed
// model text, so the original model file is not needed at evaluation time.
std::unique_ptr<Environment> make_environment(const Checkpoint& cp,
                                              const EnvironmentLayout& layout);

}  // namespace walklab
