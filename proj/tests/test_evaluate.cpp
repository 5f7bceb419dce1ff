#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "walklab/config.hpp"
#include "walklab/error.hpp"
#include "walklab/evaluate.hpp"
#include "walklab/textio.hpp"
#include "walklab/train.hpp"

using namespace walklab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "walklab_eval_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

EnvironmentLayout eval_layout() {
  EnvironmentLayout lay;
  lay.obstacles = {{2.0, 0.0, 0.4}};
  return lay;
}

std::string eval_layout_file() {
  static std::string path;
  if (path.empty()) {
    const fs::path p = fresh_dir("data") / "eval.layout";
    save_layout(eval_layout(), p.string());
    path = p.string();
  }
  return path;
}

// Zero-budget training run: a freshly initialized policy checkpoint.
Checkpoint untrained_checkpoint(const std::string& env_id) {
  ExperimentConfig cfg;
  cfg.env = env_id;
  cfg.layout_path = eval_layout_file();
  cfg.hidden = {8};
  cfg.ppo.rollout_horizon = 64;
  cfg.ppo.minibatch_size = 32;
  cfg.total_steps = 0;
  cfg.seed = 5;
  cfg.out_dir = fresh_dir("ckpt_" + env_id).string();
  return train(cfg).checkpoint;
}

std::vector<std::pair<double, double>> parse_series(const std::string& text) {
  std::vector<std::pair<double, double>> pts;
  for (auto line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    const auto parts = split(trim(line), ' ');
    REQUIRE(parts.size() == 2);
    pts.emplace_back(parse_double(parts[0]), parse_double(parts[1]));
  }
  return pts;
}

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("episode count is validated") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  const auto env = make_environment(cp.config(), eval_layout());
  CHECK_THROWS_AS(evaluate(cp, *env, 0, true), ValidationError);
  CHECK_THROWS_AS(evaluate(cp, *env, -3, true), ValidationError);
}

TEST_CASE("incompatible checkpoint and environment are rejected") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  ExperimentConfig cfg = cp.config();
  cfg.env = "stepper";
  const auto env = make_environment(cfg, eval_layout());
  CHECK_THROWS_AS(evaluate(cp, *env, 1, true), ValidationError);
}

TEST_CASE("an untrained point mass times out far from the goal") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  const auto env = make_environment(cp.config(), eval_layout());
  const EvalReport rep = evaluate(cp, *env, 4, true);
  CHECK(rep.episodes == 4);
  CHECK(rep.timeout_rate == 1.0);
  CHECK(rep.mean_length == 400.0);
  CHECK(rep.mean_final_dist > eval_layout().goal_radius);
  CHECK(rep.mean_final_dist < 10.0);
  CHECK(rep.mean_displacement >= 0.0);
  CHECK(std::isnan(rep.mean_step_length));  // no step_length diagnostic
}

TEST_CASE("outcome rates partition the episodes") {
  const Checkpoint cp = untrained_checkpoint("stepper");
  const auto env = make_environment(cp.config(), eval_layout());
  for (const bool det : {true, false}) {
    const EvalReport rep = evaluate(cp, *env, 7, det, 3);
    const double sum = rep.success_rate + rep.collision_rate + rep.fall_rate +
                       rep.timeout_rate;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(rep.mean_step_length));
    CHECK(rep.mean_step_length >= 0.0);
  }
}

TEST_CASE("reports are reproducible and salted") {
  const Checkpoint cp = untrained_checkpoint("stepper");
  const auto env = make_environment(cp.config(), eval_layout());
  const EvalReport a = evaluate(cp, *env, 5, false, 1);
  const EvalReport b = evaluate(cp, *env, 5, false, 1);
  CHECK(a.mean_return == b.mean_return);
  CHECK(a.mean_length == b.mean_length);
  CHECK(a.mean_final_dist == b.mean_final_dist);
  CHECK(a.mean_displacement == b.mean_displacement);
  CHECK(a.mean_step_length == b.mean_step_length);
  CHECK(a.success_rate == b.success_rate);

  const EvalReport c = evaluate(cp, *env, 5, false, 2);
  CHECK(a.mean_return != c.mean_return);
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("-1:0.5:1") ==
        std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(parse_grid("0.25:1:0.25") == std::vector<double>{0.25});
  CHECK_THROWS_AS(parse_grid("1:0:2"), ValidationError);
  CHECK_THROWS_AS(parse_grid("2:1:1"), ValidationError);
  CHECK_THROWS_AS(parse_grid("1:1"), ValidationError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), ValidationError);
}

TEST_CASE("sweep enumerates every target, axis and offset") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  const std::vector<double> offsets = {-2.0, 0.0, 2.0};
  const RobustnessResult res =
      robustness_sweep(cp, eval_layout(), offsets, 2, true);
  REQUIRE(res.cells.size() == 2 * 2 * 3);  // destination + 1 obstacle
  CHECK(res.cells[0].target == "destination");
  CHECK(res.cells[0].axis == "x");
  CHECK(res.cells[0].offset == -2.0);
  CHECK(res.cells[5].axis == "y");
  CHECK(res.cells[6].target == "obstacle0");

  // Obstacle shifted by -2 lands on the start position: invalid, not run.
  int invalid = 0;
  for (const RobustnessCell& c : res.cells) {
    if (!c.valid) {
      ++invalid;
      CHECK(c.target == "obstacle0");
      CHECK(c.axis == "x");
      CHECK(c.offset == -2.0);
    } else {
      CHECK(c.report.episodes == 2);
    }
  }
  CHECK(invalid == 1);

  const std::string csv = robustness_csv(res);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == res.cells.size() + 2);  // header + trailing newline
  CHECK(lines[0] == "target,axis,offset,success,collision,timeout,mean_return");
  CHECK(std::string(lines[1 + 6]) == "obstacle0,x,-2,,,,");
}

TEST_CASE("zero displacement reproduces plain evaluation") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  const auto env = make_environment(cp.config(), eval_layout());
  const EvalReport plain = evaluate(cp, *env, 3, true);
  const RobustnessResult res =
      robustness_sweep(cp, eval_layout(), {0.0}, 3, true);
  REQUIRE(res.cells.size() == 4);
  for (const RobustnessCell& c : res.cells) {
    REQUIRE(c.valid);
    CHECK(c.report.success_rate == plain.success_rate);
    CHECK(c.report.collision_rate == plain.collision_rate);
    CHECK(c.report.timeout_rate == plain.timeout_rate);
    CHECK(c.report.mean_return == plain.mean_return);
    CHECK(c.report.mean_displacement == plain.mean_displacement);
  }
}

TEST_CASE("targets pushed outside the workspace are invalid") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  const RobustnessResult res =
      robustness_sweep(cp, eval_layout(), {2.5}, 1, true);
  // Destination starts at x=5 with ws_xmax=7: +2.5 leaves the workspace.
  CHECK(res.cells[0].target == "destination");
  CHECK(res.cells[0].axis == "x");
  CHECK(!res.cells[0].valid);
  CHECK(res.cells[1].valid);  // y offset stays inside
}

TEST_CASE("non-finite offsets are rejected") {
  const Checkpoint cp = untrained_checkpoint("pointmass");
  CHECK_THROWS_AS(robustness_sweep(
                      cp, eval_layout(),
                      {std::numeric_limits<double>::quiet_NaN()}, 1, true),
                  ValidationError);
}

TEST_CASE("plot data buckets long series to 200 mean points") {
  MetricsTable t;
  t.columns = {"env_steps", "mean_return", "mean_length"};
  const int n = 2000;
  double full_return = 0.0;
  for (int i = 0; i < n; ++i) {
    const double steps = 64.0 * (i + 1);
    const double ret = std::sin(i / 200.0) + 0.001 * i;
    const double len = 400.0 - 0.1 * i;
    t.rows.push_back({steps, ret, len});
    full_return += ret;
  }
  full_return /= n;

  const PlotData pd = plot_data(t);
  const auto rs = parse_series(pd.return_vs_steps);
  const auto ls = parse_series(pd.length_vs_steps);
  REQUIRE(rs.size() == 200);
  REQUIRE(ls.size() == 200);
  for (std::size_t i = 1; i < rs.size(); ++i)
    CHECK(rs[i].first > rs[i - 1].first);  // order preserved

  double down_return = 0.0;
  for (const auto& [x, y] : rs) down_return += y;
  down_return /= static_cast<double>(rs.size());
  CHECK(std::abs(down_return - full_return) <=
        0.01 * std::abs(full_return));

  // First bucket covers rows 0..9.
  double sx = 0.0;
  for (int i = 0; i < 10; ++i) sx += t.rows[i][0];
  CHECK(rs[0].first == sx / 10.0);
}

TEST_CASE("plot data passes short series through") {
  MetricsTable t;
  t.columns = {"env_steps", "mean_return", "mean_length"};
  for (int i = 0; i < 7; ++i)
    t.rows.push_back({10.0 * (i + 1), 1.0 + i, 400.0 - i});
  const auto rs = parse_series(plot_data(t).return_vs_steps);
  REQUIRE(rs.size() == 7);
  for (int i = 0; i < 7; ++i) {
    CHECK(rs[i].first == 10.0 * (i + 1));
    CHECK(rs[i].second == 1.0 + i);
  }
}

TEST_CASE("plot data edge cases") {
  CHECK(plot_data(MetricsTable{}).return_vs_steps.empty());
  CHECK(plot_data(MetricsTable{}).length_vs_steps.empty());
  MetricsTable bad;
  bad.columns = {"a", "b"};
  bad.rows.push_back({1.0, 2.0});
  CHECK_THROWS_AS(plot_data(bad), ValidationError);
}

}  // TEST_SUITE
