#include "walklab/config.hpp"

#include <algorithm>

#include "walklab/env_biped.hpp"
#include "walklab/env_pointmass.hpp"
#include "walklab/env_stepper.hpp"
#include "walklab/error.hpp"
#include "walklab/textio.hpp"

namespace walklab {

namespace {

const char* kEnvIds[] = {"pointmass", "stepper", "biped"};

bool known_env(const std::string& id) {
  return std::find(std::begin(kEnvIds), std::end(kEnvIds), id) !=
         std::end(kEnvIds);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!known_env(env))
    throw ValidationError("unknown env '" + env +
                          "' (expected pointmass, stepper, or biped)");
  if (layout_path.empty()) throw ValidationError("layout path is required");
  if (hidden.empty()) throw ValidationError("at least one hidden layer");
  for (int h : hidden)
    if (h < 1) throw ValidationError("hidden layer sizes must be >= 1");
  ppo.validate();
  if (total_steps < 0) throw ValidationError("total_steps must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  if (ppo.rollout_horizon % workers != 0)
    throw ValidationError("horizon must divide evenly across workers");
  if (eval_episodes < 1) throw ValidationError("eval_episodes must be >= 1");
  if (checkpoint_every < 1)
    throw ValidationError("checkpoint_every must be >= 1");
  if (out_dir.empty()) throw ValidationError("out_dir is required");
  if (reset_jitter && !(*reset_jitter >= 0.0))
    throw ValidationError("reset_jitter must be >= 0");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  for (const KeyValueLine& kv : parse_key_values(text)) {
    const std::string& k = kv.key;
    auto num = [&kv]() { return parse_double(kv.value); };
    auto integer = [&kv]() { return parse_int(kv.value); };
    if (k == "env") {
      cfg.env = kv.value;
    } else if (k == "layout") {
      cfg.layout_path = kv.value;
    } else if (k == "model") {
      cfg.model_path = kv.value;
    } else if (k == "hidden") {
      cfg.hidden.clear();
      for (auto part : split(kv.value, ','))
        cfg.hidden.push_back(static_cast<int>(parse_int(trim(part))));
    } else if (k == "gamma") {
      cfg.ppo.gamma = num();
    } else if (k == "lambda") {
      cfg.ppo.gae_lambda = num();
    } else if (k == "clip_eps") {
      cfg.ppo.clip_eps = num();
    } else if (k == "epochs") {
      cfg.ppo.epochs = static_cast<int>(integer());
    } else if (k == "minibatch") {
      cfg.ppo.minibatch_size = static_cast<int>(integer());
    } else if (k == "value_coef") {
      cfg.ppo.value_coef = num();
    } else if (k == "entropy_coef") {
      cfg.ppo.entropy_coef = num();
    } else if (k == "max_grad_norm") {
      cfg.ppo.max_grad_norm = num();
    } else if (k == "horizon") {
      cfg.ppo.rollout_horizon = static_cast<int>(integer());
    } else if (k == "lr") {
      cfg.ppo.lr = num();
    } else if (k == "log_std_init") {
      cfg.ppo.log_std_init = num();
    } else if (k == "total_steps") {
      cfg.total_steps = integer();
    } else if (k == "seed") {
      cfg.seed = static_cast<uint64_t>(integer());
    } else if (k == "workers") {
      cfg.workers = static_cast<int>(integer());
    } else if (k == "eval_episodes") {
      cfg.eval_episodes = static_cast<int>(integer());
    } else if (k == "checkpoint_every") {
      cfg.checkpoint_every = static_cast<int>(integer());
    } else if (k == "out_dir") {
      cfg.out_dir = kv.value;
    } else if (k == "reset_jitter") {
      cfg.reset_jitter = num();
    } else if (k == "k_destination") {
      cfg.k_destination = num();
    } else if (k == "k_obstacle") {
      cfg.k_obstacle = num();
    } else if (k == "k_initial") {
      cfg.k_initial = num();
    } else if (k == "w_destination") {
      cfg.w_destination = num();
    } else if (k == "w_obstacle") {
      cfg.w_obstacle = num();
    } else if (k == "w_initial") {
      cfg.w_initial = num();
    } else if (k == "goal_bonus") {
      cfg.goal_bonus = num();
    } else {
      throw ValidationError("line " + std::to_string(kv.line_no) +
                            ": unknown config key '" + k + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  auto opt = [&line](const std::string& k, const std::optional<double>& v) {
    if (v) line(k, format_double(*v));
  };
  line("env", cfg.env);
  line("layout", cfg.layout_path);
  if (!cfg.model_path.empty()) line("model", cfg.model_path);
  std::string h;
  for (std::size_t i = 0; i < cfg.hidden.size(); ++i) {
    if (i) h += ',';
    h += std::to_string(cfg.hidden[i]);
  }
  line("hidden", h);
  line("gamma", format_double(cfg.ppo.gamma));
  line("lambda", format_double(cfg.ppo.gae_lambda));
  line("clip_eps", format_double(cfg.ppo.clip_eps));
  line("epochs", std::to_string(cfg.ppo.epochs));
  line("minibatch", std::to_string(cfg.ppo.minibatch_size));
  line("value_coef", format_double(cfg.ppo.value_coef));
  line("entropy_coef", format_double(cfg.ppo.entropy_coef));
  line("max_grad_norm", format_double(cfg.ppo.max_grad_norm));
  line("horizon", std::to_string(cfg.ppo.rollout_horizon));
  line("lr", format_double(cfg.ppo.lr));
  line("log_std_init", format_double(cfg.ppo.log_std_init));
  line("total_steps", std::to_string(cfg.total_steps));
  line("seed", std::to_string(cfg.seed));
  line("workers", std::to_string(cfg.workers));
  line("eval_episodes", std::to_string(cfg.eval_episodes));
  line("checkpoint_every", std::to_string(cfg.checkpoint_every));
  line("out_dir", cfg.out_dir);
  opt("reset_jitter", cfg.reset_jitter);
  opt("k_destination", cfg.k_destination);
  opt("k_obstacle", cfg.k_obstacle);
  opt("k_initial", cfg.k_initial);
  opt("w_destination", cfg.w_destination);
  opt("w_obstacle", cfg.w_obstacle);
  opt("w_initial", cfg.w_initial);
  opt("goal_bonus", cfg.goal_bonus);
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

EnvironmentLayout resolved_layout(const ExperimentConfig& cfg) {
  EnvironmentLayout lay = load_layout(cfg.layout_path);
  if (cfg.k_destination) lay.k_destination = *cfg.k_destination;
  if (cfg.k_obstacle) lay.k_obstacle = *cfg.k_obstacle;
  if (cfg.k_initial) lay.k_initial = *cfg.k_initial;
  if (cfg.w_destination) lay.w_destination = *cfg.w_destination;
  if (cfg.w_obstacle) lay.w_obstacle = *cfg.w_obstacle;
  if (cfg.w_initial) lay.w_initial = *cfg.w_initial;
  if (cfg.goal_bonus) lay.goal_bonus = *cfg.goal_bonus;
  lay.validate();
  return lay;
}

BipedModel resolved_model(const ExperimentConfig& cfg) {
  if (cfg.model_path.empty()) return BipedModel{};
  return load_biped_model(cfg.model_path);
}

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg,
                                              const EnvironmentLayout& layout) {
  if (cfg.env == "pointmass") {
    if (cfg.reset_jitter)
      return std::make_unique<PointMassEnv>(layout, *cfg.reset_jitter);
    return std::make_unique<PointMassEnv>(layout);
  }
  if (cfg.env == "stepper") {
    if (cfg.reset_jitter)
      return std::make_unique<StepperEnv>(layout, *cfg.reset_jitter);
    return std::make_unique<StepperEnv>(layout);
  }
  if (cfg.env == "biped") {
    if (cfg.reset_jitter)
      return std::make_unique<BipedEnv>(resolved_model(cfg), layout,
                                        *cfg.reset_jitter);
    return std::make_unique<BipedEnv>(resolved_model(cfg), layout);
  }
  throw ValidationError("unknown env '" + cfg.env + "'");
}

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg) {
  return make_environment(cfg, resolved_layout(cfg));
}

MlpSpec make_actor_spec(const ExperimentConfig& cfg, const Environment& env) {
  MlpSpec spec;
  spec.layer_sizes.push_back(env.obs_layout().total_dim());
  spec.layer_sizes.insert(spec.layer_sizes.end(), cfg.hidden.begin(),
                          cfg.hidden.end());
  spec.layer_sizes.push_back(env.action_dim());
  spec.hidden = Act::relu;
  spec.output = Act::tanh;
  return spec;
}

MlpSpec make_critic_spec(const ExperimentConfig& cfg, const Environment& env) {
  MlpSpec spec;
  spec.layer_sizes.push_back(env.obs_layout().total_dim());
  spec.layer_sizes.insert(spec.layer_sizes.end(), cfg.hidden.begin(),
                          cfg.hidden.end());
  spec.layer_sizes.push_back(1);
  spec.hidden = Act::relu;
  spec.output = Act::identity;
  return spec;
}

bool same_experiment(const ExperimentConfig& a, const ExperimentConfig& b) {
  ExperimentConfig ca = a, cb = b;
  ca.out_dir = cb.out_dir = "";
  ca.total_steps = cb.total_steps = 0;
  return serialize_config(ca) == serialize_config(cb);
}

}  // namespace walklab
