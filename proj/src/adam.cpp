#include "walklab/adam.hpp"

#include <cmath>

#include "walklab/error.hpp"

namespace walklab {

namespace {

bool finite_all(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

void step_span(std::span<double> p, std::span<const double> g,
               std::span<double> m, std::span<double> v, double lr_t,
               double beta1, double beta2, double eps) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr_t * m[i] / (std::sqrt(v[i]) + eps);
  }
}

// Effective step size with the bias correction folded in:
// lr * sqrt(1 - b2^t) / (1 - b1^t). Applying it to raw m / sqrt(v) equals
// the textbook m_hat / (sqrt(v_hat) + eps') update up to the epsilon
// placement, so eps is rescaled alongside to keep the update exact.
double corrected_lr(const AdamConfig& c, int64_t t) {
  const double b1t = std::pow(c.beta1, static_cast<double>(t));
  const double b2t = std::pow(c.beta2, static_cast<double>(t));
  return c.lr * std::sqrt(1.0 - b2t) / (1.0 - b1t);
}

double corrected_eps(const AdamConfig& c, int64_t t) {
  return c.eps * std::sqrt(1.0 - std::pow(c.beta2, static_cast<double>(t)));
}

}  // namespace

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw ValidationError("adam lr must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ValidationError("adam beta1 out of (0,1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ValidationError("adam beta2 out of (0,1)");
  if (!(eps > 0.0)) throw ValidationError("adam eps must be > 0");
}

AdamState make_adam(const ParameterSet& like, const AdamConfig& cfg) {
  cfg.validate();
  AdamState s;
  s.m = zeros_like(like);
  s.v = zeros_like(like);
  s.t = 0;
  s.cfg = cfg;
  return s;
}

AdamVecState make_adam_vec(std::size_t n, const AdamConfig& cfg) {
  cfg.validate();
  AdamVecState s;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  s.t = 0;
  s.cfg = cfg;
  return s;
}

void adam_step(ParameterSet& params, const ParameterSet& grads, AdamState& state) {
  if (!params.same_shape(grads) || !params.same_shape(state.m))
    throw ValidationError("adam_step: shape mismatch");
  for (const auto& l : grads.layers)
    if (!finite_all(l.w) || !finite_all(l.b))
      throw DivergenceError("adam_step: non-finite gradient");

  state.t += 1;
  const double lr_t = corrected_lr(state.cfg, state.t);
  const double eps_t = corrected_eps(state.cfg, state.t);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    step_span(params.layers[l].w, grads.layers[l].w, state.m.layers[l].w,
              state.v.layers[l].w, lr_t, state.cfg.beta1, state.cfg.beta2, eps_t);
    step_span(params.layers[l].b, grads.layers[l].b, state.m.layers[l].b,
              state.v.layers[l].b, lr_t, state.cfg.beta1, state.cfg.beta2, eps_t);
  }
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamVecState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw ValidationError("adam_step(vec): shape mismatch");
  if (!finite_all(grads)) throw DivergenceError("adam_step: non-finite gradient");

  state.t += 1;
  step_span(params, grads, state.m, state.v, corrected_lr(state.cfg, state.t),
            state.cfg.beta1, state.cfg.beta2, corrected_eps(state.cfg, state.t));
}

}  // namespace walklab
