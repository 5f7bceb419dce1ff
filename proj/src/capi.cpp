#include "walklab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "walklab/checkpoint.hpp"
#include "walklab/config.hpp"
#include "walklab/env_biped.hpp"
#include "walklab/env_pointmass.hpp"
#include "walklab/env_stepper.hpp"
#include "walklab/error.hpp"
#include "walklab/evaluate.hpp"
#include "walklab/textio.hpp"
#include "walklab/train.hpp"

using namespace walklab;

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `fn`, mapping exceptions to error codes and capturing the message.
template <typename Fn>
int guard(Fn&& fn) {
  try {
    g_error.clear();
    return fn();
  } catch (const ValidationError& e) {
    g_error = e.what();
    return WL_E_VALIDATION;
  } catch (const DivergenceError& e) {
    g_error = e.what();
    return WL_E_DIVERGENCE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return WL_E_INTERNAL;
  }
}

int require(bool ok, const char* what) {
  if (ok) return WL_OK;
  g_error = what;
  return WL_E_VALIDATION;
}

std::string format_report(const EvalReport& r) {
  std::string out;
  auto line = [&out](const char* k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  line("episodes", std::to_string(r.episodes));
  line("success", format_double(r.success_rate));
  line("collision", format_double(r.collision_rate));
  line("fall", format_double(r.fall_rate));
  line("timeout", format_double(r.timeout_rate));
  line("mean_return", format_double(r.mean_return));
  line("mean_length", format_double(r.mean_length));
  line("mean_final_dist", format_double(r.mean_final_dist));
  line("mean_displacement", format_double(r.mean_displacement));
  if (std::isfinite(r.mean_step_length))
    line("mean_step_length", format_double(r.mean_step_length));
  return out;
}

}  // namespace

struct wl_env {
  std::unique_ptr<Environment> env;
};

struct wl_policy {
  Checkpoint cp;
};

extern "C" {

const char* wl_version(void) { return "0.1.0"; }

const char* wl_last_error(void) { return g_error.c_str(); }

void wl_string_free(char* s) { std::free(s); }

int wl_train(const char* config_path, const char* resume_path) {
  return guard([&]() -> int {
    if (const int rc = require(config_path, "config_path is null")) return rc;
    const ExperimentConfig cfg = load_config(config_path);
    const TrainResult res = train(cfg, resume_path ? resume_path : "");
    if (res.diverged) {
      g_error = "training diverged at update " +
                std::to_string(res.checkpoint.update_index + 1) +
                "; last good checkpoint: " + res.checkpoint_path;
      return WL_E_DIVERGENCE;
    }
    return WL_OK;
  });
}

int wl_eval(const char* checkpoint_path, const char* layout_path, int episodes,
            int stochastic, char** out_report) {
  return guard([&]() -> int {
    if (const int rc = require(checkpoint_path && layout_path && out_report,
                               "null argument"))
      return rc;
    const Checkpoint cp = load_checkpoint(checkpoint_path);
    const EnvironmentLayout layout = load_layout(layout_path);
    const auto env = make_environment(cp, layout);
    const EvalReport rep =
        evaluate(cp, *env, episodes, stochastic == 0);
    *out_report = dup_string(format_report(rep));
    return WL_OK;
  });
}

int wl_robustness(const char* checkpoint_path, const char* layout_path,
                  const char* grid, int episodes, int stochastic,
                  char** out_csv) {
  return guard([&]() -> int {
    if (const int rc = require(
            checkpoint_path && layout_path && grid && out_csv, "null argument"))
      return rc;
    const Checkpoint cp = load_checkpoint(checkpoint_path);
    const EnvironmentLayout layout = load_layout(layout_path);
    const RobustnessResult res = robustness_sweep(
        cp, layout, parse_grid(grid), episodes, stochastic == 0);
    *out_csv = dup_string(robustness_csv(res));
    return WL_OK;
  });
}

int wl_plot_data(const char* metrics_path, char** out_return_series,
                 char** out_length_series) {
  return guard([&]() -> int {
    if (const int rc = require(
            metrics_path && out_return_series && out_length_series,
            "null argument"))
      return rc;
    const PlotData pd = plot_data(load_metrics_csv(metrics_path));
    *out_return_series = dup_string(pd.return_vs_steps);
    *out_length_series = dup_string(pd.length_vs_steps);
    return WL_OK;
  });
}

int wl_checkpoint_dump(const char* checkpoint_path, char** out_text) {
  return guard([&]() -> int {
    if (const int rc = require(checkpoint_path && out_text, "null argument"))
      return rc;
    *out_text = dup_string(checkpoint_text_dump(load_checkpoint(checkpoint_path)));
    return WL_OK;
  });
}

int wl_env_create(const char* env_id, const char* layout_path,
                  const char* model_path, wl_env** out) {
  return guard([&]() -> int {
    if (const int rc = require(env_id && layout_path && out, "null argument"))
      return rc;
    const std::string id = env_id;
    const EnvironmentLayout layout = load_layout(layout_path);
    auto handle = std::make_unique<wl_env>();
    if (id == "pointmass") {
      handle->env = std::make_unique<PointMassEnv>(layout);
    } else if (id == "stepper") {
      handle->env = std::make_unique<StepperEnv>(layout);
    } else if (id == "biped") {
      const BipedModel model =
          model_path ? load_biped_model(model_path) : BipedModel{};
      handle->env = std::make_unique<BipedEnv>(model, layout);
    } else {
      throw ValidationError("unknown env '" + id +
                            "' (expected pointmass, stepper, or biped)");
    }
    *out = handle.release();
    return WL_OK;
  });
}

void wl_env_destroy(wl_env* env) { delete env; }

int wl_env_obs_dim(const wl_env* env) {
  return env ? env->env->obs_layout().total_dim() : -1;
}

int wl_env_action_dim(const wl_env* env) {
  return env ? env->env->action_dim() : -1;
}

int wl_env_reset(wl_env* env, uint64_t seed, double* obs) {
  return guard([&]() -> int {
    if (const int rc = require(env && obs, "null argument")) return rc;
    SplitRng rng(seed);
    const StepResult r = env->env->reset(rng);
    std::memcpy(obs, r.obs.data(), r.obs.size() * sizeof(double));
    return WL_OK;
  });
}

int wl_env_step(wl_env* env, const double* action, double* obs, double* reward,
                int* done, int* reason) {
  return guard([&]() -> int {
    if (const int rc =
            require(env && action && obs && reward && done && reason,
                    "null argument"))
      return rc;
    const std::span<const double> a(action,
                                    static_cast<std::size_t>(
                                        env->env->action_dim()));
    const StepResult r = env->env->step(a);
    std::memcpy(obs, r.obs.data(), r.obs.size() * sizeof(double));
    *reward = r.reward;
    *done = (r.terminated || r.truncated) ? 1 : 0;
    *reason = static_cast<int>(r.reason);
    return WL_OK;
  });
}

int wl_policy_load(const char* checkpoint_path, wl_policy** out) {
  return guard([&]() -> int {
    if (const int rc = require(checkpoint_path && out, "null argument"))
      return rc;
    auto handle = std::make_unique<wl_policy>();
    handle->cp = load_checkpoint(checkpoint_path);
    *out = handle.release();
    return WL_OK;
  });
}

void wl_policy_destroy(wl_policy* policy) { delete policy; }

int wl_policy_obs_dim(const wl_policy* policy) {
  return policy ? policy->cp.policy.obs_dim() : -1;
}

int wl_policy_action_dim(const wl_policy* policy) {
  return policy ? policy->cp.policy.action_dim() : -1;
}

int wl_policy_mean_action(const wl_policy* policy, const double* obs,
                          double* action) {
  return guard([&]() -> int {
    if (const int rc = require(policy && obs && action, "null argument"))
      return rc;
    const std::span<const double> o(
        obs, static_cast<std::size_t>(policy->cp.policy.obs_dim()));
    const std::vector<double> a = policy->cp.policy.mean(o);
    std::memcpy(action, a.data(), a.size() * sizeof(double));
    return WL_OK;
  });
}

}  // extern "C"
