/* walklab public C API.
 *
 * Every function returns an error code; 0 is success. On failure,
 * wl_last_error() describes what went wrong (thread-local, valid until the
 * next API call on the same thread). Strings returned through out-parameters
 * are heap-allocated; release them with wl_string_free.
 */
#ifndef WALKLAB_H
#define WALKLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  WL_OK = 0,
  WL_E_INTERNAL = 1,   /* unexpected failure */
  WL_E_DIVERGENCE = 2, /* non-finite loss; last good checkpoint kept */
  WL_E_VALIDATION = 3  /* bad input: config, file, argument, mismatch */
};

const char* wl_version(void);
const char* wl_last_error(void);
void wl_string_free(char* s);

/* ---- experiment verbs ----------------------------------------------- */

/* Runs training as described by the config file; writes metrics.csv and
 * checkpoints into the config's out_dir. Pass resume_path = NULL for a
 * fresh run. Returns WL_E_DIVERGENCE if the run stopped on a non-finite
 * loss (the pre-update checkpoint is still saved). */
int wl_train(const char* config_path, const char* resume_path);

/* Evaluates a checkpoint on a layout for `episodes` episodes and returns a
 * "key = value" report. stochastic != 0 samples actions instead of using
 * the Gaussian mean. */
int wl_eval(const char* checkpoint_path, const char* layout_path,
            int episodes, int stochastic, char** out_report);

/* Displacement study: moves the destination and each obstacle along x and y
 * through the offsets in `grid` ("lo:step:hi") and evaluates each valid
 * displaced layout. Returns the grid CSV. */
int wl_robustness(const char* checkpoint_path, const char* layout_path,
                  const char* grid, int episodes, int stochastic,
                  char** out_csv);

/* Downsampled learning curves from a metrics CSV: two "x y" series of at
 * most 200 points each. */
int wl_plot_data(const char* metrics_path, char** out_return_series,
                 char** out_length_series);

/* Plain-text dump of every checkpoint field, for diffing. */
int wl_checkpoint_dump(const char* checkpoint_path, char** out_text);

/* ---- environment handles --------------------------------------------- */

typedef struct wl_env wl_env;

/* env_id: "pointmass", "stepper", or "biped". model_path applies to the
 * biped only; pass NULL for built-in defaults. */
int wl_env_create(const char* env_id, const char* layout_path,
                  const char* model_path, wl_env** out);
void wl_env_destroy(wl_env* env);

int wl_env_obs_dim(const wl_env* env);
int wl_env_action_dim(const wl_env* env);

/* Starts an episode from a fresh deterministic stream for `seed`; writes
 * obs_dim observation values. */
int wl_env_reset(wl_env* env, uint64_t seed, double* obs);

/* Advances one control step. Writes obs_dim observation values, the reward,
 * done (0/1) and the termination reason (0 none, 1 goal, 2 collision,
 * 3 fall, 4 timeout, 5 divergence). */
int wl_env_step(wl_env* env, const double* action, double* obs,
                double* reward, int* done, int* reason);

/* ---- policy handles --------------------------------------------------- */

typedef struct wl_policy wl_policy;

int wl_policy_load(const char* checkpoint_path, wl_policy** out);
void wl_policy_destroy(wl_policy* policy);

int wl_policy_obs_dim(const wl_policy* policy);
int wl_policy_action_dim(const wl_policy* policy);

/* Deterministic (mean) action for an observation. */
int wl_policy_mean_action(const wl_policy* policy, const double* obs,
                          double* action);

#ifdef __cplusplus
}
#endif

#endif /* WALKLAB_H */
