#include "walklab/train.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "walklab/error.hpp"
#include "walklab/metrics.hpp"
#include "walklab/textio.hpp"

namespace walklab {

namespace {

// Role labels for derived RNG streams; evaluation uses its own first label
// so its streams can never collide with training's (update, worker, role).
constexpr uint64_t kRoleEnv = 0;
constexpr uint64_t kRolePolicy = 1;
constexpr uint64_t kRoleShuffle = 2;
constexpr uint64_t kShuffleWorker = 0xFFFF;
constexpr uint64_t kInitLabel = 0x5EED;

std::string padded(int64_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() >= 6 ? 0 : 6 - s.size(), '0') + s;
}

MetricsRow make_row(int64_t update_index, int64_t env_steps,
                    const CollectStats& stats, const UpdateStats& up,
                    const std::vector<std::size_t>& term_idx) {
  MetricsRow row;
  row.update_index = update_index;
  row.env_steps = env_steps;
  const auto& eps = stats.episodes;
  if (!eps.empty()) {
    double sum = 0.0, len = 0.0;
    for (const EpisodeRecord& e : eps) {
      sum += e.episode_return;
      len += e.length;
    }
    row.mean_return = sum / static_cast<double>(eps.size());
    row.mean_length = len / static_cast<double>(eps.size());
    double var = 0.0;
    for (const EpisodeRecord& e : eps) {
      const double d = e.episode_return - row.mean_return;
      var += d * d;
    }
    row.std_return = std::sqrt(var / static_cast<double>(eps.size()));
  }
  for (const EpisodeRecord& e : eps) {
    switch (e.reason) {
      case TermReason::goal: ++row.goal; break;
      case TermReason::collision: ++row.collision; break;
      case TermReason::fall: ++row.fall; break;
      case TermReason::timeout: ++row.timeout; break;
      case TermReason::divergence: ++row.divergence; break;
      case TermReason::none: break;
    }
  }
  row.policy_loss = up.policy_loss;
  row.value_loss = up.value_loss;
  row.entropy = up.entropy;
  row.approx_kl = up.approx_kl;
  row.term_means.reserve(term_idx.size());
  const double inv = stats.steps > 0 ? 1.0 / stats.steps : 0.0;
  for (std::size_t i : term_idx)
    row.term_means.push_back(stats.info_sums[i] * inv);
  return row;
}

}  // namespace

TrainResult train(const ExperimentConfig& cfg, const std::string& resume_path) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  const EnvironmentLayout layout = resolved_layout(cfg);
  std::vector<std::unique_ptr<Environment>> envs;
  envs.reserve(cfg.workers);
  for (int w = 0; w < cfg.workers; ++w)
    envs.push_back(make_environment(cfg, layout));

  const std::string layout_text = serialize_layout(layout);
  const std::string model_text =
      cfg.env == "biped" ? serialize_biped_model(resolved_model(cfg)) : "";

  // rt_* diagnostic positions; the metrics header carries these names.
  const std::vector<std::string>& diags = envs[0]->diagnostics();
  std::vector<std::size_t> term_idx;
  std::vector<std::string> term_names;
  for (std::size_t i = 0; i < diags.size(); ++i)
    if (diags[i].rfind("rt_", 0) == 0) {
      term_idx.push_back(i);
      term_names.push_back(diags[i]);
    }

  const SplitRng master(cfg.seed);
  Checkpoint cp;
  if (resume_path.empty()) {
    cp.config_text = serialize_config(cfg);
    cp.layout_text = layout_text;
    cp.model_text = model_text;
    cp.obs_layout = envs[0]->obs_layout();
    cp.policy = make_policy(make_actor_spec(cfg, *envs[0]),
                            master.derive({kInitLabel, 0}).key(),
                            cfg.ppo.log_std_init);
    cp.critic = make_value_net(make_critic_spec(cfg, *envs[0]),
                               master.derive({kInitLabel, 1}).key());
    const AdamConfig adam_cfg{cfg.ppo.lr, 0.9, 0.999, 1e-8};
    cp.actor_adam = make_adam(cp.policy.params, adam_cfg);
    cp.log_std_adam = make_adam_vec(cp.policy.log_std.size(), adam_cfg);
    cp.critic_adam = make_adam(cp.critic.params, adam_cfg);
    cp.master_seed = cfg.seed;
  } else {
    cp = load_checkpoint(resume_path);
    if (!same_experiment(cfg, cp.config()))
      throw ValidationError(resume_path +
                            ": checkpoint belongs to a different experiment "
                            "(only out_dir and total_steps may change)");
    if (cp.layout_text != layout_text)
      throw ValidationError(resume_path +
                            ": layout file changed since the checkpoint");
    if (cp.model_text != model_text)
      throw ValidationError(resume_path +
                            ": model file changed since the checkpoint");
    verify_compatible(cp, *envs[0]);
    cp.config_text = serialize_config(cfg);  // echo the active config
  }

  TrainResult result;
  result.metrics_path = cfg.out_dir + "/metrics.csv";
  result.checkpoint_path = cfg.out_dir + "/final.wlck";

  const bool fresh_metrics =
      resume_path.empty() || !std::filesystem::exists(result.metrics_path);
  std::ofstream metrics(result.metrics_path,
                        fresh_metrics ? std::ios::trunc : std::ios::app);
  if (!metrics)
    throw ValidationError("cannot write metrics: " + result.metrics_path);
  if (fresh_metrics) metrics << metrics_header(term_names) << std::flush;

  const int horizon = cfg.ppo.rollout_horizon;
  const int per_worker = horizon / cfg.workers;

  while (cp.env_steps + horizon <= cfg.total_steps) {
    const uint64_t u = static_cast<uint64_t>(cp.update_index);

    CollectStats stats;
    stats.info_sums.assign(diags.size(), 0.0);
    std::vector<RolloutBuffer> buffers;
    buffers.reserve(cfg.workers);
    for (int w = 0; w < cfg.workers; ++w) {
      SplitRng env_rng = master.derive({u, static_cast<uint64_t>(w), kRoleEnv});
      SplitRng policy_rng =
          master.derive({u, static_cast<uint64_t>(w), kRolePolicy});
      CollectStats worker_stats;
      buffers.push_back(collect_rollout(*envs[w], cp.policy, cp.critic,
                                        per_worker, policy_rng, env_rng,
                                        &worker_stats));
      stats.episodes.insert(stats.episodes.end(), worker_stats.episodes.begin(),
                            worker_stats.episodes.end());
      stats.steps += worker_stats.steps;
      for (std::size_t i = 0; i < diags.size(); ++i)
        stats.info_sums[i] += worker_stats.info_sums[i];
    }

    // Snapshot so a diverging update can be rolled back to the last good
    // state before saving.
    const GaussianPolicy policy_before = cp.policy;
    const ValueNet critic_before = cp.critic;
    const AdamState actor_adam_before = cp.actor_adam;
    const AdamVecState log_std_adam_before = cp.log_std_adam;
    const AdamState critic_adam_before = cp.critic_adam;

    UpdateStats up;
    try {
      SplitRng shuffle_rng = master.derive({u, kShuffleWorker, kRoleShuffle});
      up = ppo_update(cp.policy, cp.critic, buffers, cfg.ppo, cp.actor_adam,
                      cp.log_std_adam, cp.critic_adam, shuffle_rng);
    } catch (const DivergenceError&) {
      cp.policy = policy_before;
      cp.critic = critic_before;
      cp.actor_adam = actor_adam_before;
      cp.log_std_adam = log_std_adam_before;
      cp.critic_adam = critic_adam_before;
      save_checkpoint(cp, result.checkpoint_path);
      result.checkpoint = cp;
      result.diverged = true;
      return result;
    }

    cp.env_steps += horizon;
    cp.update_index += 1;
    metrics << format_metrics_row(
                   make_row(cp.update_index, cp.env_steps, stats, up, term_idx))
            << std::flush;

    if (cp.update_index % cfg.checkpoint_every == 0)
      save_checkpoint(
          cp, cfg.out_dir + "/ckpt_" + padded(cp.update_index) + ".wlck");
  }

  save_checkpoint(cp, result.checkpoint_path);
  result.checkpoint = cp;
  return result;
}

}  // namespace walklab
