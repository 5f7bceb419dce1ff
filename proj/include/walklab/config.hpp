#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "walklab/biped.hpp"
#include "walklab/env.hpp"
#include "walklab/layout.hpp"
#include "walklab/mlp.hpp"
#include "walklab/ppo.hpp"

namespace walklab {

// One experiment, fully determined by this struct plus the referenced layout
// and model files. Canonical serialization makes the config echoed into
// checkpoints byte-comparable.
struct ExperimentConfig {
  std::string env;          // pointmass | stepper | biped
  std::string layout_path;
  std::string model_path;   // biped only; empty uses the built-in defaults
  std::vector<int> hidden{64, 64};
  PpoConfig ppo;
  long long total_steps = 0;
  uint64_t seed = 0;
  int workers = 1;
  int eval_episodes = 100;
  int checkpoint_every = 50;  // updates between periodic checkpoints
  std::string out_dir;
  std::optional<double> reset_jitter;  // env constructor default when unset

  // Distance-field overrides applied on top of the loaded layout.
  std::optional<double> k_destination, k_obstacle, k_initial;
  std::optional<double> w_destination, w_obstacle, w_initial;
  std::optional<double> goal_bonus;

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Layout file with the config's field overrides applied and re-validated.
EnvironmentLayout resolved_layout(const ExperimentConfig& cfg);

// Model file (biped) or defaults; canonical text for the checkpoint echo.
BipedModel resolved_model(const ExperimentConfig& cfg);

// Fresh environment instance for one worker. Layout/model may be passed
// explicitly so evaluation can substitute displaced layouts.
std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg);
std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg,
                                              const EnvironmentLayout& layout);

// [obs_dim, hidden..., action_dim] tanh actor / [obs_dim, hidden..., 1]
// identity critic.
MlpSpec make_actor_spec(const ExperimentConfig& cfg, const Environment& env);
MlpSpec make_critic_spec(const ExperimentConfig& cfg, const Environment& env);

// Serialized equality ignoring out_dir and total_steps: what a resumed run
// must match before continuing from a checkpoint.
bool same_experiment(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace walklab
