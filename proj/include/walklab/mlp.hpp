#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "walklab/rng.hpp"

namespace walklab {

enum class Act : uint8_t { relu = 0, tanh = 1, identity = 2 };

// Dense feed-forward network description. layer_sizes holds
// [input, hidden..., output]; the hidden activation applies to every layer
// except the last, which uses `output` (tanh for actors, identity for
// critics).
struct MlpSpec {
  std::vector<int> layer_sizes;
  Act hidden = Act::relu;
  Act output = Act::tanh;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  // Throws ValidationError on fewer than 2 sizes or non-positive entries.
  void validate() const;
  bool operator==(const MlpSpec&) const = default;
};

struct LayerParams {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // row-major, out x in
  std::vector<double> b;  // out
};

// All weights and biases of one network; shapes mirror an MlpSpec.
struct ParameterSet {
  std::vector<LayerParams> layers;

  bool same_shape(const ParameterSet& other) const;
  bool all_finite() const;
  // Elementwise visitation in a fixed order (layer, w row-major, then b).
  std::size_t num_params() const;
};

// Weights uniform in +-sqrt(1/fan_in), biases zero. Tanh-output networks get
// their final layer weights scaled by 0.01 so fresh actors start near the
// posture offset origin. Deterministic in (spec, seed).
ParameterSet init_params(const MlpSpec& spec, uint64_t seed);

// Per-layer pre-activations and activations kept for the backward pass.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;   // z_l = W_l a_{l-1} + b_l
  std::vector<std::vector<double>> post;  // a_l = act(z_l)
};

// Returns the network output; fills `cache` when non-null. Throws
// ValidationError on an input dimension mismatch.
std::vector<double> mlp_forward(const MlpSpec& spec, const ParameterSet& params,
                                std::span<const double> input,
                                ForwardCache* cache = nullptr);

struct Gradients {
  ParameterSet params;             // d<output_grad, output>/dparams
  std::vector<double> input;       // d<output_grad, output>/dinput
};

// Exact reverse-mode gradients of the scalar <output_grad, output> with
// respect to every parameter and the input. The cache must come from
// mlp_forward on the same params (shape-checked).
Gradients mlp_backward(const MlpSpec& spec, const ParameterSet& params,
                       const ForwardCache& cache,
                       std::span<const double> output_grad);

// Zero-filled gradients/accumulators shaped like `like`.
ParameterSet zeros_like(const ParameterSet& like);

}  // namespace walklab
