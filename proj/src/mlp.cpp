#include "walklab/mlp.hpp"

#include <cmath>
#include <string>

#include "walklab/error.hpp"

namespace walklab {

namespace {

double apply_act(Act a, double z) {
  switch (a) {
    case Act::relu: return z > 0.0 ? z : 0.0;
    case Act::tanh: return std::tanh(z);
    case Act::identity: return z;
  }
  return z;
}

// Derivative expressed through the post-activation value (enough for the
// three activations used here; relu' at exactly 0 is taken as 0).
double act_grad(Act a, double z, double post) {
  switch (a) {
    case Act::relu: return z > 0.0 ? 1.0 : 0.0;
    case Act::tanh: return 1.0 - post * post;
    case Act::identity: return 1.0;
  }
  return 1.0;
}

}  // namespace

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2)
    throw ValidationError("MlpSpec needs at least input and output sizes");
  for (int s : layer_sizes)
    if (s < 1)
      throw ValidationError("MlpSpec layer sizes must be >= 1, got " +
                            std::to_string(s));
}

bool ParameterSet::same_shape(const ParameterSet& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].in != other.layers[i].in ||
        layers[i].out != other.layers[i].out)
      return false;
  return true;
}

bool ParameterSet::all_finite() const {
  for (const auto& l : layers) {
    for (double v : l.w)
      if (!std::isfinite(v)) return false;
    for (double v : l.b)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

std::size_t ParameterSet::num_params() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

ParameterSet init_params(const MlpSpec& spec, uint64_t seed) {
  spec.validate();
  SplitRng rng(seed);
  ParameterSet p;
  p.layers.resize(spec.num_layers());
  for (int l = 0; l < spec.num_layers(); ++l) {
    auto& layer = p.layers[l];
    layer.in = spec.layer_sizes[l];
    layer.out = spec.layer_sizes[l + 1];
    const double bound = std::sqrt(1.0 / layer.in);
    const bool final_actor_layer =
        (l == spec.num_layers() - 1) && spec.output == Act::tanh;
    const double scale = final_actor_layer ? 0.01 : 1.0;
    layer.w.resize(static_cast<std::size_t>(layer.out) * layer.in);
    for (auto& w : layer.w) w = scale * rng.uniform(-bound, bound);
    layer.b.assign(layer.out, 0.0);
  }
  return p;
}

std::vector<double> mlp_forward(const MlpSpec& spec, const ParameterSet& params,
                                std::span<const double> input,
                                ForwardCache* cache) {
  if (static_cast<int>(input.size()) != spec.input_dim())
    throw ValidationError("mlp_forward: input has " +
                          std::to_string(input.size()) + " entries, spec wants " +
                          std::to_string(spec.input_dim()));
  if (static_cast<int>(params.layers.size()) != spec.num_layers())
    throw ValidationError("mlp_forward: params/spec layer count mismatch");

  std::vector<double> a(input.begin(), input.end());
  if (cache) {
    cache->input = a;
    cache->pre.assign(spec.num_layers(), {});
    cache->post.assign(spec.num_layers(), {});
  }
  for (int l = 0; l < spec.num_layers(); ++l) {
    const auto& layer = params.layers[l];
    if (static_cast<int>(a.size()) != layer.in)
      throw ValidationError("mlp_forward: layer " + std::to_string(l) +
                            " expects " + std::to_string(layer.in) +
                            " inputs, got " + std::to_string(a.size()));
    const Act act = (l == spec.num_layers() - 1) ? spec.output : spec.hidden;
    std::vector<double> z(layer.out);
    for (int o = 0; o < layer.out; ++o) {
      const double* wrow = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
      double s = layer.b[o];
      for (int i = 0; i < layer.in; ++i) s += wrow[i] * a[i];
      z[o] = s;
    }
    std::vector<double> post(layer.out);
    for (int o = 0; o < layer.out; ++o) post[o] = apply_act(act, z[o]);
    if (cache) {
      cache->pre[l] = z;
      cache->post[l] = post;
    }
    a = std::move(post);
  }
  return a;
}

Gradients mlp_backward(const MlpSpec& spec, const ParameterSet& params,
                       const ForwardCache& cache,
                       std::span<const double> output_grad) {
  if (static_cast<int>(cache.pre.size()) != spec.num_layers() ||
      static_cast<int>(cache.input.size()) != spec.input_dim())
    throw ValidationError("mlp_backward: cache does not match spec");
  if (static_cast<int>(output_grad.size()) != spec.output_dim())
    throw ValidationError("mlp_backward: output_grad dimension mismatch");

  Gradients g;
  g.params = zeros_like(params);
  std::vector<double> da(output_grad.begin(), output_grad.end());
  for (int l = spec.num_layers() - 1; l >= 0; --l) {
    const auto& layer = params.layers[l];
    if (static_cast<int>(cache.pre[l].size()) != layer.out)
      throw ValidationError("mlp_backward: stale cache at layer " +
                            std::to_string(l));
    const Act act = (l == spec.num_layers() - 1) ? spec.output : spec.hidden;
    const std::vector<double>& below =
        (l == 0) ? cache.input : cache.post[l - 1];

    // dz = da * act'(z)
    std::vector<double> dz(layer.out);
    for (int o = 0; o < layer.out; ++o)
      dz[o] = da[o] * act_grad(act, cache.pre[l][o], cache.post[l][o]);

    auto& gl = g.params.layers[l];
    for (int o = 0; o < layer.out; ++o) {
      double* gw = gl.w.data() + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) gw[i] += dz[o] * below[i];
      gl.b[o] += dz[o];
    }

    std::vector<double> da_below(layer.in, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      const double* wrow = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) da_below[i] += wrow[i] * dz[o];
    }
    da = std::move(da_below);
  }
  g.input = std::move(da);
  return g;
}

ParameterSet zeros_like(const ParameterSet& like) {
  ParameterSet z;
  z.layers.resize(like.layers.size());
  for (std::size_t l = 0; l < like.layers.size(); ++l) {
    z.layers[l].in = like.layers[l].in;
    z.layers[l].out = like.layers[l].out;
    z.layers[l].w.assign(like.layers[l].w.size(), 0.0);
    z.layers[l].b.assign(like.layers[l].b.size(), 0.0);
  }
  return z;
}

}  // namespace walklab
