#pragma once

#include <cstdint>
#include <span>

#include "walklab/mlp.hpp"

namespace walklab {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

// Bias-corrected Adam accumulators shaped like the parameters they drive.
struct AdamState {
  ParameterSet m;
  ParameterSet v;
  int64_t t = 0;
  AdamConfig cfg;
};

// Flat-vector variant (used for the policy's log_std).
struct AdamVecState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;
  AdamConfig cfg;
};

AdamState make_adam(const ParameterSet& like, const AdamConfig& cfg);
AdamVecState make_adam_vec(std::size_t n, const AdamConfig& cfg);

// In-place update. Rejects the whole step (DivergenceError) if any gradient
// entry is non-finite; params and state are left untouched in that case.
void adam_step(ParameterSet& params, const ParameterSet& grads, AdamState& state);
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamVecState& state);

}  // namespace walklab
