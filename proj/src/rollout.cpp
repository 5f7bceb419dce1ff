#include "walklab/rollout.hpp"

#include <algorithm>

#include "walklab/error.hpp"

namespace walklab {

GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double lambda) {
  const int n = static_cast<int>(buffer.steps.size());
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);

  double next_adv = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    const Transition& tr = buffer.steps[t];
    const bool done = tr.terminated || tr.truncated;
    double v_succ;
    if (t == n - 1)
      v_succ = buffer.bootstrap_value;
    else if (done)
      v_succ = tr.next_value;
    else
      v_succ = buffer.steps[t + 1].value;

    const double not_term = tr.terminated ? 0.0 : 1.0;
    const double delta = tr.reward + gamma * v_succ * not_term - tr.value;
    const double chain = done ? 0.0 : 1.0;
    next_adv = delta + gamma * lambda * chain * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + tr.value;
  }
  return out;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

}  // namespace walklab
