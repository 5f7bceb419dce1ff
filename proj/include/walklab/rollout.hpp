#pragma once

#include <vector>

namespace walklab {

// One environment step as seen by the learner. `next_value` is the critic's
// value of the state the environment actually reached, recorded only when the
// step ended an episode; time-limit truncations bootstrap from it while
// genuine terminations never bootstrap. For interior steps the successor
// value is simply the next transition's `value`.
struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool terminated = false;
  bool truncated = false;
  double next_value = 0.0;
};

// Fixed-horizon batch for one PPO update (one per rollout worker).
// bootstrap_value is the critic's value of the state after the last
// transition, used when the buffer ends mid-episode.
struct RolloutBuffer {
  std::vector<Transition> steps;
  double bootstrap_value = 0.0;

  std::size_t size() const { return steps.size(); }
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Generalized advantage estimation over one buffer:
//   delta_t = r_t + gamma * v_succ(t) * (1 - terminated_t) - v_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
// where done = terminated || truncated (the recursion never crosses an
// episode boundary) and v_succ(t) is the successor-state value: the next
// transition's value inside an episode, the stored next_value at a
// truncation, and bootstrap_value at the end of the buffer.
GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double lambda);

// Per-sample clipped PPO objective: min(r*A, clip(r, 1-eps, 1+eps)*A).
double clipped_surrogate(double ratio, double advantage, double clip_eps);

}  // namespace walklab
