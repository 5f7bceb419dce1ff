#include "walklab/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "walklab/error.hpp"

namespace walklab {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
}

std::vector<double> GaussianPolicy::mean(std::span<const double> obs,
                                         ForwardCache* cache) const {
  std::vector<double> m = mlp_forward(spec, params, obs, cache);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= action_scale[i];
  return m;
}

double GaussianPolicy::log_prob(std::span<const double> mean,
                                std::span<const double> action) const {
  double lp = 0.0;
  for (std::size_t i = 0; i < log_std.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i] - 0.5 * kLogTwoPi;
  }
  return lp;
}

double GaussianPolicy::entropy() const {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (kLogTwoPi + 1.0);
  return h;
}

void GaussianPolicy::clamp_log_std() {
  for (double& ls : log_std) ls = std::clamp(ls, kLogStdMin, kLogStdMax);
}

GaussianPolicy make_policy(const MlpSpec& spec, uint64_t seed,
                           double log_std_init) {
  spec.validate();
  if (spec.output != Act::tanh)
    throw ValidationError("policy mean network must use a tanh output");
  GaussianPolicy p;
  p.spec = spec;
  p.params = init_params(spec, seed);
  p.log_std.assign(spec.output_dim(), log_std_init);
  p.action_scale.assign(spec.output_dim(), 1.0);
  p.clamp_log_std();
  return p;
}

ActionSample sample_action(const GaussianPolicy& policy,
                           std::span<const double> obs, SplitRng& rng) {
  ActionSample s;
  const std::vector<double> mu = policy.mean(obs);
  s.action.resize(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    s.action[i] = mu[i] + std::exp(policy.log_std[i]) * rng.normal();
  s.log_prob = policy.log_prob(mu, s.action);
  return s;
}

}  // namespace walklab
