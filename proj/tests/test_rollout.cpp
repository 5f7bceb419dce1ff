#include "walklab/rollout.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "walklab/rng.hpp"

using namespace walklab;

namespace {

// Independent lambda-return oracle: direct double-loop sum
//   A_t = sum_{l=t..L} (gamma*lambda)^(l-t) * delta_l,
// where L is the first done index >= t (or the buffer end), instead of the
// production backward recursion.
std::vector<double> gae_oracle(const RolloutBuffer& buf, double gamma,
                               double lambda) {
  const int n = static_cast<int>(buf.steps.size());
  auto succ_value = [&](int l) {
    const Transition& tr = buf.steps[l];
    if (l == n - 1) return buf.bootstrap_value;
    if (tr.terminated || tr.truncated) return tr.next_value;
    return buf.steps[l + 1].value;
  };
  auto delta = [&](int l) {
    const Transition& tr = buf.steps[l];
    const double mask = tr.terminated ? 0.0 : 1.0;
    return tr.reward + gamma * succ_value(l) * mask - tr.value;
  };
  std::vector<double> adv(n);
  for (int t = 0; t < n; ++t) {
    double a = 0.0, w = 1.0;
    for (int l = t; l < n; ++l) {
      a += w * delta(l);
      if (buf.steps[l].terminated || buf.steps[l].truncated) break;
      w *= gamma * lambda;
    }
    adv[t] = a;
  }
  return adv;
}

RolloutBuffer random_buffer(SplitRng& rng, int n) {
  RolloutBuffer buf;
  for (int t = 0; t < n; ++t) {
    Transition tr;
    tr.reward = rng.uniform(-1, 1);
    tr.value = rng.uniform(-2, 2);
    const double u = rng.uniform();
    tr.terminated = u < 0.15;
    tr.truncated = !tr.terminated && u < 0.3;
    tr.next_value = (tr.terminated || tr.truncated)
                        ? (tr.terminated ? 0.0 : rng.uniform(-2, 2))
                        : 0.0;
    buf.steps.push_back(tr);
  }
  buf.bootstrap_value = rng.uniform(-2, 2);
  return buf;
}

}  // namespace

TEST_SUITE("rollout") {

TEST_CASE("single step reduces to one delta") {
  RolloutBuffer buf;
  Transition tr;
  tr.reward = 1.0;
  tr.value = 0.5;
  buf.steps.push_back(tr);
  buf.bootstrap_value = 2.0;
  GaeResult g = compute_gae(buf, 0.99, 0.95);
  CHECK(g.advantages[0] == doctest::Approx(1.0 + 0.99 * 2.0 - 0.5).epsilon(1e-12));
  CHECK(g.returns[0] == doctest::Approx(g.advantages[0] + 0.5).epsilon(1e-12));
}

TEST_CASE("termination ignores the successor value") {
  RolloutBuffer buf;
  Transition tr;
  tr.reward = 1.0;
  tr.value = 0.5;
  tr.terminated = true;
  buf.steps.push_back(tr);
  buf.bootstrap_value = 99.0;  // must be masked by terminated
  GaeResult g = compute_gae(buf, 0.99, 0.95);
  CHECK(g.advantages[0] == doctest::Approx(1.0 - 0.5).epsilon(1e-12));
}

TEST_CASE("truncation bootstraps the stored next value") {
  RolloutBuffer buf;
  Transition a;
  a.reward = 0.0;
  a.value = 1.0;
  a.truncated = true;
  a.next_value = 3.0;
  Transition b;
  b.reward = 0.0;
  b.value = -1.0;
  buf.steps = {a, b};
  buf.bootstrap_value = 0.0;
  GaeResult g = compute_gae(buf, 0.5, 1.0);
  // delta_0 = 0 + 0.5*3 - 1 = 0.5, chain broken by truncation
  CHECK(g.advantages[0] == doctest::Approx(0.5).epsilon(1e-12));
  // delta_1 = 0 + 0.5*0 - (-1) = 1
  CHECK(g.advantages[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda zero reduces to one-step TD error") {
  SplitRng rng(1);
  RolloutBuffer buf = random_buffer(rng, 40);
  GaeResult g = compute_gae(buf, 0.99, 0.0);
  std::vector<double> oracle = gae_oracle(buf, 0.99, 0.0);
  for (int t = 0; t < 40; ++t)
    CHECK(g.advantages[t] == doctest::Approx(oracle[t]).epsilon(1e-12));
}

TEST_CASE("lambda one gamma one gives undiscounted return minus value") {
  RolloutBuffer buf;
  for (int t = 0; t < 5; ++t) {
    Transition tr;
    tr.reward = 1.0;
    tr.value = 0.0;
    tr.terminated = t == 4;
    buf.steps.push_back(tr);
  }
  buf.bootstrap_value = 0.0;
  GaeResult g = compute_gae(buf, 1.0, 1.0);
  for (int t = 0; t < 5; ++t)
    CHECK(g.advantages[t] == doctest::Approx(5.0 - t).epsilon(1e-12));
}

TEST_CASE("recursion equals the double-loop oracle on random buffers") {
  SplitRng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 64);
    RolloutBuffer buf = random_buffer(rng, n);
    const double gamma = rng.uniform(0.8, 1.0);
    const double lambda = rng.uniform(0.0, 1.0);
    GaeResult g = compute_gae(buf, gamma, lambda);
    std::vector<double> oracle = gae_oracle(buf, gamma, lambda);
    for (int t = 0; t < n; ++t) {
      CHECK(g.advantages[t] == doctest::Approx(oracle[t]).epsilon(1e-10));
      CHECK(g.returns[t] ==
            doctest::Approx(oracle[t] + buf.steps[t].value).epsilon(1e-10));
    }
  }
}

TEST_CASE("clipped surrogate cases") {
  // Inside the trust region the raw ratio wins.
  CHECK(clipped_surrogate(1.0, 2.0, 0.2) == doctest::Approx(2.0));
  // Positive advantage, ratio above the ceiling: clipped.
  CHECK(clipped_surrogate(1.5, 1.0, 0.2) == doctest::Approx(1.2));
  // Negative advantage, ratio below the floor: clipped branch is the min.
  CHECK(clipped_surrogate(0.5, -1.0, 0.2) == doctest::Approx(-0.8));
  // Negative advantage, ratio above the ceiling: raw branch is the min.
  CHECK(clipped_surrogate(1.5, -1.0, 0.2) == doctest::Approx(-1.5));
  CHECK(clipped_surrogate(0.5, 1.0, 0.2) == doctest::Approx(0.5));
}

}  // TEST_SUITE
