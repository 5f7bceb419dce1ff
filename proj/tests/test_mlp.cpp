#include "walklab/mlp.hpp"

#include <cmath>

#include "doctest.h"
#include "testutil.hpp"
#include "walklab/error.hpp"
#include "walklab/rng.hpp"

using namespace walklab;
using namespace walklab::testutil;

namespace {

// Draw an input whose relu pre-activations all clear `margin`, so central
// differences (h << margin) cannot flip a unit on or off.
std::vector<double> safe_input(const MlpSpec& spec, const ParameterSet& params,
                               SplitRng& rng, double margin) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> x(spec.input_dim());
    for (auto& v : x) v = rng.uniform(-1.5, 1.5);
    ForwardCache cache;
    mlp_forward(spec, params, x, &cache);
    bool ok = true;
    for (int l = 0; l < spec.num_layers() - 1 && ok; ++l)
      for (double z : cache.pre[l])
        if (std::abs(z) < margin) {
          ok = false;
          break;
        }
    if (ok) return x;
  }
  FAIL("no relu-safe input found");
  return {};
}

void gradcheck(const MlpSpec& spec, uint64_t seed, double tol) {
  ParameterSet params = init_params(spec, seed);
  SplitRng rng(seed ^ 0xABCD);
  std::vector<double> x = safe_input(spec, params, rng, 1e-3);
  std::vector<double> gout(spec.output_dim());
  for (auto& g : gout) g = rng.uniform(-1.0, 1.0);

  ForwardCache cache;
  mlp_forward(spec, params, x, &cache);
  Gradients an = mlp_backward(spec, params, cache, gout);

  auto scalar = [&]() {
    std::vector<double> y = mlp_forward(spec, params, x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += gout[i] * y[i];
    return s;
  };

  const double h = 1e-6;
  std::vector<double*> ptrs = param_ptrs(params);
  std::vector<double> an_flat = flatten(an.params);
  REQUIRE(ptrs.size() == an_flat.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    const double fd = central_diff(scalar, ptrs[i], h);
    const double denom = std::max({std::abs(fd), std::abs(an_flat[i]), 1e-6});
    worst = std::max(worst, std::abs(fd - an_flat[i]) / denom);
  }
  CHECK(worst < tol);

  // Input gradient through the same scalar.
  double worst_in = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = central_diff(scalar, &x[i], h);
    const double denom = std::max({std::abs(fd), std::abs(an.input[i]), 1e-6});
    worst_in = std::max(worst_in, std::abs(fd - an.input[i]) / denom);
  }
  CHECK(worst_in < tol);
}

}  // namespace

TEST_SUITE("mlp") {

TEST_CASE("spec validation") {
  MlpSpec s;
  s.layer_sizes = {4};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.layer_sizes = {4, 0, 2};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.layer_sizes = {4, 8, 2};
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("init shapes bounds and determinism") {
  MlpSpec s;
  s.layer_sizes = {6, 16, 16, 3};
  ParameterSet a = init_params(s, 11);
  ParameterSet b = init_params(s, 11);
  ParameterSet c = init_params(s, 12);
  REQUIRE(a.layers.size() == 3);
  CHECK(a.num_params() == 6 * 16 + 16 + 16 * 16 + 16 + 16 * 3 + 3);
  bool any_diff = false;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    const double bound = std::sqrt(1.0 / a.layers[l].in);
    const double scale = (l == 2 && s.output == Act::tanh) ? 0.01 : 1.0;
    for (std::size_t i = 0; i < a.layers[l].w.size(); ++i) {
      CHECK(std::abs(a.layers[l].w[i]) <= scale * bound);
      CHECK(a.layers[l].w[i] == b.layers[l].w[i]);
      any_diff |= a.layers[l].w[i] != c.layers[l].w[i];
    }
    for (double bias : a.layers[l].b) CHECK(bias == 0.0);
  }
  CHECK(any_diff);
  CHECK(a.all_finite());
  CHECK(a.same_shape(b));
}

TEST_CASE("final layer damping only for tanh output") {
  MlpSpec actor;
  actor.layer_sizes = {4, 32, 2};
  actor.output = Act::tanh;
  MlpSpec critic = actor;
  critic.output = Act::identity;
  ParameterSet pa = init_params(actor, 5);
  ParameterSet pc = init_params(critic, 5);
  double max_a = 0.0, max_c = 0.0;
  for (double w : pa.layers[1].w) max_a = std::max(max_a, std::abs(w));
  for (double w : pc.layers[1].w) max_c = std::max(max_c, std::abs(w));
  CHECK(max_a < 0.01 * std::sqrt(1.0 / 32) + 1e-12);
  CHECK(max_c > 0.05 * std::sqrt(1.0 / 32));
}

TEST_CASE("forward matches a hand computation") {
  MlpSpec s;
  s.layer_sizes = {2, 2, 1};
  s.hidden = Act::relu;
  s.output = Act::identity;
  ParameterSet p;
  p.layers.resize(2);
  p.layers[0] = {2, 2, {1.0, -2.0, 0.5, 0.25}, {0.1, -0.1}};
  p.layers[1] = {2, 1, {3.0, -1.0}, {0.05}};
  const double x[2] = {0.3, 0.4};
  // z1 = [0.3-0.8+0.1, 0.15+0.1-0.1] = [-0.4, 0.15]; relu -> [0, 0.15]
  // out = 3*0 - 1*0.15 + 0.05 = -0.1
  auto y = mlp_forward(s, p, x);
  REQUIRE(y.size() == 1);
  CHECK(y[0] == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("tanh output bounds") {
  MlpSpec s;
  s.layer_sizes = {3, 8, 2};
  ParameterSet p = init_params(s, 3);
  SplitRng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x = {rng.uniform(-5, 5), rng.uniform(-5, 5),
                             rng.uniform(-5, 5)};
    for (double v : mlp_forward(s, p, x)) {
      CHECK(v > -1.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("input dimension mismatch throws") {
  MlpSpec s;
  s.layer_sizes = {3, 4, 1};
  ParameterSet p = init_params(s, 1);
  std::vector<double> bad = {1.0, 2.0};
  CHECK_THROWS_AS(mlp_forward(s, p, bad), ValidationError);
}

TEST_CASE("backward matches central differences on fixed shapes") {
  MlpSpec actor;
  actor.layer_sizes = {4, 8, 8, 3};
  actor.hidden = Act::relu;
  actor.output = Act::tanh;
  gradcheck(actor, 101, 1e-4);

  MlpSpec critic;
  critic.layer_sizes = {5, 8, 8, 1};
  critic.hidden = Act::relu;
  critic.output = Act::identity;
  gradcheck(critic, 202, 1e-4);

  MlpSpec tanh_net;
  tanh_net.layer_sizes = {3, 6, 2};
  tanh_net.hidden = Act::tanh;
  tanh_net.output = Act::identity;
  gradcheck(tanh_net, 303, 1e-4);
}

TEST_CASE("backward matches central differences on random shapes") {
  SplitRng shape_rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    MlpSpec s;
    const int depth = 1 + static_cast<int>(shape_rng.next_u64() % 3);
    s.layer_sizes.push_back(1 + static_cast<int>(shape_rng.next_u64() % 6));
    for (int d = 0; d < depth; ++d)
      s.layer_sizes.push_back(1 + static_cast<int>(shape_rng.next_u64() % 10));
    s.output = (shape_rng.next_u64() & 1) ? Act::tanh : Act::identity;
    gradcheck(s, 1000 + trial, 1e-4);
  }
}

TEST_CASE("backward rejects stale cache") {
  MlpSpec s;
  s.layer_sizes = {3, 4, 2};
  ParameterSet p = init_params(s, 1);
  ForwardCache cache;
  std::vector<double> x = {0.1, 0.2, 0.3};
  mlp_forward(s, p, x, &cache);
  std::vector<double> gout = {1.0, 1.0};
  MlpSpec other;
  other.layer_sizes = {3, 5, 2};
  ParameterSet po = init_params(other, 1);
  CHECK_THROWS_AS(mlp_backward(other, po, cache, gout), ValidationError);
  std::vector<double> bad_gout = {1.0};
  CHECK_THROWS_AS(mlp_backward(s, p, cache, bad_gout), ValidationError);
}

}  // TEST_SUITE
