#include "walklab/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "walklab/error.hpp"

namespace walklab {

void PpoConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma out of (0,1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw ValidationError("gae_lambda out of [0,1]");
  if (!(clip_eps > 0.0)) throw ValidationError("clip_eps must be > 0");
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (minibatch_size < 1) throw ValidationError("minibatch_size must be >= 1");
  if (!(value_coef >= 0.0)) throw ValidationError("value_coef must be >= 0");
  if (!(entropy_coef >= 0.0)) throw ValidationError("entropy_coef must be >= 0");
  if (!(max_grad_norm > 0.0)) throw ValidationError("max_grad_norm must be > 0");
  if (rollout_horizon < 1) throw ValidationError("rollout_horizon must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("lr must be > 0");
}

ValueNet make_value_net(const MlpSpec& spec, uint64_t seed) {
  spec.validate();
  if (spec.output != Act::identity)
    throw ValidationError("value net must use an identity output");
  if (spec.output_dim() != 1)
    throw ValidationError("value net must have a scalar output");
  return ValueNet{spec, init_params(spec, seed)};
}

void normalize_advantages(std::span<double> adv) {
  if (adv.empty()) return;
  const double n = static_cast<double>(adv.size());
  double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::max(std::sqrt(var / n), 1e-8);
  for (double& a : adv) a = (a - mean) / sd;
}

MinibatchGrads compute_minibatch_grads(
    const GaussianPolicy& policy, const ValueNet& value_net,
    std::span<const Transition* const> samples,
    std::span<const double> advantages, std::span<const double> returns,
    const PpoConfig& cfg) {
  const double m = static_cast<double>(samples.size());
  const int adim = policy.action_dim();

  MinibatchGrads g;
  g.actor = zeros_like(policy.params);
  g.log_std.assign(adim, 0.0);
  g.critic = zeros_like(value_net.params);

  std::vector<double> inv_var(adim), inv_std(adim);
  for (int j = 0; j < adim; ++j) {
    inv_std[j] = std::exp(-policy.log_std[j]);
    inv_var[j] = inv_std[j] * inv_std[j];
  }

  const double entropy = policy.entropy();
  ForwardCache cache;
  std::vector<double> out_grad(adim);

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Transition& tr = *samples[s];
    const double adv = advantages[s];

    const std::vector<double> mu = policy.mean(tr.obs, &cache);
    const double lp_new = policy.log_prob(mu, tr.action);
    const double log_ratio = lp_new - tr.log_prob;
    const double ratio = std::exp(log_ratio);

    const double pg_unclipped = -adv * ratio;
    const double pg_clipped =
        -adv * std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    const bool use_unclipped = pg_unclipped >= pg_clipped;
    g.policy_loss += std::max(pg_unclipped, pg_clipped) / m;
    g.approx_kl += ((ratio - 1.0) - log_ratio) / m;

    // d(pg loss)/d lp_new; the clipped branch has zero ratio-gradient.
    const double dloss_dlp = use_unclipped ? -adv * ratio / m : 0.0;
    if (dloss_dlp != 0.0) {
      for (int j = 0; j < adim; ++j) {
        const double diff = tr.action[j] - mu[j];
        // d lp/d mu_j = (a - mu)/sigma^2, chain through the action scale.
        out_grad[j] = dloss_dlp * diff * inv_var[j] * policy.action_scale[j];
        const double z = diff * inv_std[j];
        g.log_std[j] += dloss_dlp * (z * z - 1.0);
      }
      Gradients ag = mlp_backward(policy.spec, policy.params, cache, out_grad);
      for (std::size_t l = 0; l < ag.params.layers.size(); ++l) {
        auto& dst = g.actor.layers[l];
        const auto& src = ag.params.layers[l];
        for (std::size_t i = 0; i < src.w.size(); ++i) dst.w[i] += src.w[i];
        for (std::size_t i = 0; i < src.b.size(); ++i) dst.b[i] += src.b[i];
      }
    }

    // Value head.
    ForwardCache vcache;
    const double v = mlp_forward(value_net.spec, value_net.params, tr.obs,
                                 &vcache)[0];
    const double verr = v - returns[s];
    g.value_loss += verr * verr / m;
    const double dv[1] = {2.0 * cfg.value_coef * verr / m};
    Gradients vg = mlp_backward(value_net.spec, value_net.params, vcache, dv);
    for (std::size_t l = 0; l < vg.params.layers.size(); ++l) {
      auto& dst = g.critic.layers[l];
      const auto& src = vg.params.layers[l];
      for (std::size_t i = 0; i < src.w.size(); ++i) dst.w[i] += src.w[i];
      for (std::size_t i = 0; i < src.b.size(); ++i) dst.b[i] += src.b[i];
    }
  }

  // Entropy bonus: state-independent, dH/dlog_std_j = 1.
  for (int j = 0; j < adim; ++j) g.log_std[j] -= cfg.entropy_coef;
  g.entropy = entropy;
  return g;
}

namespace {

double sq_norm(const ParameterSet& p) {
  double s = 0.0;
  for (const auto& l : p.layers) {
    for (double w : l.w) s += w * w;
    for (double b : l.b) s += b * b;
  }
  return s;
}

void scale_params(ParameterSet& p, double c) {
  for (auto& l : p.layers) {
    for (double& w : l.w) w *= c;
    for (double& b : l.b) b *= c;
  }
}

bool stats_finite(const MinibatchGrads& g) {
  return std::isfinite(g.policy_loss) && std::isfinite(g.value_loss) &&
         std::isfinite(g.entropy) && std::isfinite(g.approx_kl);
}

}  // namespace

UpdateStats ppo_update(GaussianPolicy& policy, ValueNet& value_net,
                       std::span<const RolloutBuffer> buffers,
                       const PpoConfig& cfg, AdamState& actor_adam,
                       AdamVecState& log_std_adam, AdamState& critic_adam,
                       SplitRng& shuffle_rng) {
  cfg.validate();

  // Merge buffers in order; GAE is evaluated per buffer so advantage chains
  // never cross worker boundaries.
  std::vector<const Transition*> flat;
  std::vector<double> advantages;
  std::vector<double> returns;
  for (const auto& buf : buffers) {
    GaeResult gae = compute_gae(buf, cfg.gamma, cfg.gae_lambda);
    for (std::size_t t = 0; t < buf.steps.size(); ++t) {
      flat.push_back(&buf.steps[t]);
      advantages.push_back(gae.advantages[t]);
      returns.push_back(gae.returns[t]);
    }
  }
  const int n = static_cast<int>(flat.size());
  if (n == 0) throw ValidationError("ppo_update: empty rollout");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  UpdateStats stats;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the learner stream; independent of thread timing.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(shuffle_rng.next_u64() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (int start = 0; start < n; start += cfg.minibatch_size) {
      const int end = std::min(start + cfg.minibatch_size, n);
      std::vector<const Transition*> mb;
      std::vector<double> mb_adv, mb_ret;
      mb.reserve(end - start);
      for (int i = start; i < end; ++i) {
        mb.push_back(flat[order[i]]);
        mb_adv.push_back(advantages[order[i]]);
        mb_ret.push_back(returns[order[i]]);
      }
      normalize_advantages(mb_adv);

      MinibatchGrads g =
          compute_minibatch_grads(policy, value_net, mb, mb_adv, mb_ret, cfg);
      if (!stats_finite(g))
        throw DivergenceError("ppo_update: non-finite loss");

      double norm2 = sq_norm(g.actor) + sq_norm(g.critic);
      for (double v : g.log_std) norm2 += v * v;
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm))
        throw DivergenceError("ppo_update: non-finite gradient norm");
      if (norm > cfg.max_grad_norm) {
        const double c = cfg.max_grad_norm / norm;
        scale_params(g.actor, c);
        scale_params(g.critic, c);
        for (double& v : g.log_std) v *= c;
      }

      adam_step(policy.params, g.actor, actor_adam);
      adam_step(policy.log_std, g.log_std, log_std_adam);
      policy.clamp_log_std();
      adam_step(value_net.params, g.critic, critic_adam);

      stats.policy_loss += g.policy_loss;
      stats.value_loss += g.value_loss;
      stats.entropy += g.entropy;
      stats.approx_kl += g.approx_kl;
      stats.grad_norm += norm;
      stats.minibatches += 1;
    }
  }
  const double k = static_cast<double>(stats.minibatches);
  stats.policy_loss /= k;
  stats.value_loss /= k;
  stats.entropy /= k;
  stats.approx_kl /= k;
  stats.grad_norm /= k;
  return stats;
}

RolloutBuffer collect_rollout(Environment& env, const GaussianPolicy& policy,
                              const ValueNet& value_net, int horizon,
                              SplitRng& policy_rng, SplitRng& env_rng,
                              CollectStats* stats) {
  if (horizon < 1) throw ValidationError("collect_rollout: horizon must be >= 1");

  RolloutBuffer buffer;
  buffer.steps.reserve(horizon);
  if (stats) {
    stats->episodes.clear();
    stats->info_sums.assign(env.diagnostics().size(), 0.0);
    stats->steps = 0;
  }

  StepResult sr = env.reset(env_rng);
  std::vector<double> obs = std::move(sr.obs);
  double ep_return = 0.0;
  int ep_len = 0;

  for (int t = 0; t < horizon; ++t) {
    ActionSample as = sample_action(policy, obs, policy_rng);
    const double v = value_net.value(obs);
    StepResult r = env.step(as.action);

    Transition tr;
    tr.obs = std::move(obs);
    tr.action = std::move(as.action);
    tr.log_prob = as.log_prob;
    tr.reward = r.reward;
    tr.value = v;
    tr.terminated = r.terminated;
    tr.truncated = r.truncated;

    ep_return += r.reward;
    ep_len += 1;
    if (stats) {
      stats->steps += 1;
      const std::size_t ni = std::min(r.info.size(), stats->info_sums.size());
      for (std::size_t i = 0; i < ni; ++i) stats->info_sums[i] += r.info[i];
    }

    if (r.terminated || r.truncated) {
      tr.next_value = r.terminated ? 0.0 : value_net.value(r.obs);
      if (stats)
        stats->episodes.push_back({ep_return, ep_len,
                                   r.terminated ? r.reason : TermReason::timeout});
      ep_return = 0.0;
      ep_len = 0;
      obs = env.reset(env_rng).obs;
    } else {
      obs = std::move(r.obs);
    }
    buffer.steps.push_back(std::move(tr));
  }

  const Transition& last = buffer.steps.back();
  if (last.terminated || last.truncated)
    buffer.bootstrap_value = last.next_value;
  else
    buffer.bootstrap_value = value_net.value(obs);
  return buffer;
}

}  // namespace walklab
