#pragma once

#include <span>
#include <vector>

#include "walklab/mlp.hpp"
#include "walklab/rng.hpp"

namespace walklab {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 1.0;

// Diagonal Gaussian over actions. The mean is a tanh-output MLP scaled by the
// per-dimension action range; log_std is state-independent and learnable,
// clamped to [kLogStdMin, kLogStdMax] after every optimizer step.
struct GaussianPolicy {
  MlpSpec spec;
  ParameterSet params;
  std::vector<double> log_std;
  std::vector<double> action_scale;  // per-dimension, all 1.0 for the built-in envs

  int action_dim() const { return spec.output_dim(); }
  int obs_dim() const { return spec.input_dim(); }

  // Distribution mean at `obs`; every component lies in (-scale, +scale).
  std::vector<double> mean(std::span<const double> obs,
                           ForwardCache* cache = nullptr) const;

  // Exact diagonal-Gaussian log density of `action` given `mean`.
  double log_prob(std::span<const double> mean,
                  std::span<const double> action) const;

  // State-independent differential entropy.
  double entropy() const;

  void clamp_log_std();
};

GaussianPolicy make_policy(const MlpSpec& spec, uint64_t seed,
                           double log_std_init);

struct ActionSample {
  std::vector<double> action;
  double log_prob = 0.0;
};

ActionSample sample_action(const GaussianPolicy& policy,
                           std::span<const double> obs, SplitRng& rng);

}  // namespace walklab
