#pragma once

#include <span>
#include <vector>

#include "walklab/adam.hpp"
#include "walklab/env.hpp"
#include "walklab/policy.hpp"
#include "walklab/rollout.hpp"

namespace walklab {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 4;
  int minibatch_size = 256;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  int rollout_horizon = 4096;
  double lr = 3e-4;
  double log_std_init = -0.7;

  void validate() const;
  bool operator==(const PpoConfig&) const = default;
};

struct ValueNet {
  MlpSpec spec;
  ParameterSet params;

  double value(std::span<const double> obs) const {
    return mlp_forward(spec, params, obs)[0];
  }
};

ValueNet make_value_net(const MlpSpec& spec, uint64_t seed);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;  // mean squared value error, unweighted
  double entropy = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;  // pre-clip global norm, averaged over minibatches
  int minibatches = 0;
};

// Gradients and diagnostics for one minibatch; exposed separately so tests
// can compare the clipped-surrogate gradient against a vanilla
// policy-gradient oracle.
struct MinibatchGrads {
  ParameterSet actor;
  std::vector<double> log_std;
  ParameterSet critic;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
};

// Loss per sample: max(-ratio*A, -clip(ratio)*A) + value_coef*(v - R)^2
// - entropy_coef*H, averaged over the minibatch. `advantages` must already
// be normalized; `returns` are the GAE returns.
MinibatchGrads compute_minibatch_grads(
    const GaussianPolicy& policy, const ValueNet& value_net,
    std::span<const Transition* const> samples,
    std::span<const double> advantages, std::span<const double> returns,
    const PpoConfig& cfg);

// Normalize in place to mean 0 / std 1 with the divisor guarded at 1e-8.
void normalize_advantages(std::span<double> adv);

// Runs `epochs` passes of shuffled minibatches over the merged buffers and
// applies clipped Adam steps to the policy (mean net + log_std) and critic.
// Throws DivergenceError and leaves no partial minibatch applied if a loss
// or gradient goes non-finite.
UpdateStats ppo_update(GaussianPolicy& policy, ValueNet& value_net,
                       std::span<const RolloutBuffer> buffers,
                       const PpoConfig& cfg, AdamState& actor_adam,
                       AdamVecState& log_std_adam, AdamState& critic_adam,
                       SplitRng& shuffle_rng);

struct EpisodeRecord {
  double episode_return = 0.0;
  int length = 0;
  TermReason reason = TermReason::none;
};

// Episode-level bookkeeping gathered while collecting (episodes completed
// within the phase; the trailing partial episode is bootstrapped, not
// counted).
struct CollectStats {
  std::vector<EpisodeRecord> episodes;
  std::vector<double> info_sums;  // aligned with Environment::diagnostics()
  long steps = 0;
};

// Resets the environment, then steps it `horizon` times with auto-reset on
// episode end. Termination leaves the successor value at zero; truncation
// records the critic value of the reached state so GAE can bootstrap it.
RolloutBuffer collect_rollout(Environment& env, const GaussianPolicy& policy,
                              const ValueNet& value_net, int horizon,
                              SplitRng& policy_rng, SplitRng& env_rng,
                              CollectStats* stats = nullptr);

}  // namespace walklab
