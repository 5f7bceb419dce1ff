#include "walklab/policy.hpp"

#include <cmath>

#include "doctest.h"
#include "walklab/error.hpp"

using namespace walklab;

namespace {

MlpSpec actor_spec(int in, int out) {
  MlpSpec s;
  s.layer_sizes = {in, 16, 16, out};
  s.output = Act::tanh;
  return s;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("log_prob matches the diagonal gaussian density") {
  GaussianPolicy p = make_policy(actor_spec(3, 2), 21, -0.7);
  p.log_std = {-0.3, 0.4};
  std::vector<double> mu = {0.5, -1.0};
  std::vector<double> a = {0.9, -1.3};
  double expect = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sigma = std::exp(p.log_std[i]);
    const double d = a[i] - mu[i];
    expect += -0.5 * d * d / (sigma * sigma) - std::log(sigma) -
              0.5 * std::log(2.0 * 3.14159265358979323846);
  }
  CHECK(p.log_prob(mu, a) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("entropy closed form") {
  GaussianPolicy p = make_policy(actor_spec(3, 3), 2, 0.0);
  p.log_std = {0.1, -0.5, 0.7};
  double expect = 0.0;
  for (double ls : p.log_std)
    expect += ls + 0.5 * (1.0 + std::log(2.0 * 3.14159265358979323846));
  CHECK(p.entropy() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mean respects the action scale bound") {
  GaussianPolicy p = make_policy(actor_spec(4, 2), 9, -0.7);
  p.action_scale = {2.0, 0.5};
  SplitRng rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> obs = {rng.uniform(-3, 3), rng.uniform(-3, 3),
                               rng.uniform(-3, 3), rng.uniform(-3, 3)};
    auto m = p.mean(obs);
    CHECK(std::abs(m[0]) < 2.0);
    CHECK(std::abs(m[1]) < 0.5);
  }
}

TEST_CASE("sampling is deterministic in the stream and self-consistent") {
  GaussianPolicy p = make_policy(actor_spec(3, 2), 33, -0.7);
  std::vector<double> obs = {0.2, -0.4, 1.0};
  SplitRng r1(10), r2(10);
  ActionSample a = sample_action(p, obs, r1);
  ActionSample b = sample_action(p, obs, r2);
  CHECK(a.action == b.action);
  CHECK(a.log_prob == b.log_prob);
  // Stored log_prob must equal a recomputation from scratch.
  CHECK(a.log_prob ==
        doctest::Approx(p.log_prob(p.mean(obs), a.action)).epsilon(1e-12));
}

TEST_CASE("sample moments track mean and log_std") {
  GaussianPolicy p = make_policy(actor_spec(2, 1), 44, -0.7);
  p.log_std = {0.2};
  std::vector<double> obs = {0.3, 0.3};
  const double mu = p.mean(obs)[0];
  SplitRng rng(123);
  const int n = 50000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double a = sample_action(p, obs, rng).action[0];
    sum += a;
    sum2 += a * a;
  }
  const double m = sum / n;
  const double sd = std::sqrt(sum2 / n - m * m);
  CHECK(m == doctest::Approx(mu).epsilon(0.05));
  CHECK(sd == doctest::Approx(std::exp(0.2)).epsilon(0.05));
}

TEST_CASE("log_std clamp") {
  GaussianPolicy p = make_policy(actor_spec(2, 2), 1, -0.7);
  p.log_std = {-9.0, 4.0};
  p.clamp_log_std();
  CHECK(p.log_std[0] == kLogStdMin);
  CHECK(p.log_std[1] == kLogStdMax);
  GaussianPolicy q = make_policy(actor_spec(2, 1), 1, -12.0);
  CHECK(q.log_std[0] == kLogStdMin);
}

TEST_CASE("policy requires a tanh output head") {
  MlpSpec s = actor_spec(3, 2);
  s.output = Act::identity;
  CHECK_THROWS_AS(make_policy(s, 1, -0.7), ValidationError);
}

TEST_CASE("log_prob gradient identity in the mean") {
  // d lp / d mu_j = (a_j - mu_j) / sigma_j^2, the exact factor the PPO
  // backward pass chains through the actor network.
  GaussianPolicy p = make_policy(actor_spec(2, 2), 3, -0.2);
  std::vector<double> mu = {0.4, -0.6};
  std::vector<double> a = {0.1, 0.2};
  const double h = 1e-7;
  for (int j = 0; j < 2; ++j) {
    std::vector<double> mp = mu, mm = mu;
    mp[j] += h;
    mm[j] -= h;
    const double fd = (p.log_prob(mp, a) - p.log_prob(mm, a)) / (2 * h);
    const double sigma = std::exp(p.log_std[j]);
    const double an = (a[j] - mu[j]) / (sigma * sigma);
    CHECK(fd == doctest::Approx(an).epsilon(1e-6));
  }
}

}  // TEST_SUITE
