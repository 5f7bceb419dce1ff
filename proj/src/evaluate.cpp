#include "walklab/evaluate.hpp"

#include <cmath>
#include <limits>

#include "walklab/error.hpp"
#include "walklab/policy.hpp"
#include "walklab/textio.hpp"

namespace walklab {

namespace {

constexpr uint64_t kEvalLabel = 0xEF;

// Index of the first matching column name, -1 if none match.
int find_column(const std::vector<std::string>& cols,
                std::initializer_list<const char*> names) {
  for (const char* n : names)
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == n) return static_cast<int>(i);
  return -1;
}

}  // namespace

EvalReport evaluate(const Checkpoint& cp, Environment& env, int episodes,
                    bool deterministic, uint64_t salt) {
  if (episodes < 1) throw ValidationError("episodes must be >= 1");
  verify_compatible(cp, env);

  const std::vector<std::string> traj_cols = env.trajectory_columns();
  const int cx = find_column(traj_cols, {"x", "base_x"});
  const int cy = find_column(traj_cols, {"y", "base_y"});
  const int dist_diag = diag_index(env, "dist_goal");
  const int steplen_diag = diag_index(env, "step_length");

  const SplitRng master(cp.master_seed);
  EvalReport rep;
  rep.episodes = episodes;
  double steplen_sum = 0.0;
  long steplen_steps = 0;

  for (int e = 0; e < episodes; ++e) {
    const uint64_t eu = static_cast<uint64_t>(e);
    SplitRng env_rng = master.derive({kEvalLabel, salt, eu, 0});
    SplitRng policy_rng = master.derive({kEvalLabel, salt, eu, 1});

    StepResult r = env.reset(env_rng);
    double start_x = 0.0, start_y = 0.0;
    if (cx >= 0) {
      const std::vector<double> row = env.trajectory_row();
      start_x = row[cx];
      if (cy >= 0) start_y = row[cy];
    }

    double ep_return = 0.0;
    int length = 0;
    TermReason reason = TermReason::timeout;
    while (true) {
      std::vector<double> action;
      if (deterministic) {
        action = cp.policy.mean(r.obs);
      } else {
        action = sample_action(cp.policy, r.obs, policy_rng).action;
      }
      r = env.step(action);
      ep_return += r.reward;
      length += 1;
      if (steplen_diag >= 0) {
        steplen_sum += r.info[steplen_diag];
        steplen_steps += 1;
      }
      if (r.terminated || r.truncated) {
        reason = r.reason;
        break;
      }
    }

    switch (reason) {
      case TermReason::goal: rep.success_rate += 1.0; break;
      case TermReason::collision: rep.collision_rate += 1.0; break;
      case TermReason::fall:
      case TermReason::divergence: rep.fall_rate += 1.0; break;
      default: rep.timeout_rate += 1.0; break;
    }
    rep.mean_return += ep_return;
    rep.mean_length += length;
    if (dist_diag >= 0) rep.mean_final_dist += r.info[dist_diag];
    if (cx >= 0) {
      const std::vector<double> row = env.trajectory_row();
      const double dx = row[cx] - start_x;
      const double dy = cy >= 0 ? row[cy] - start_y : 0.0;
      rep.mean_displacement += std::hypot(dx, dy);
    }
  }

  const double inv = 1.0 / episodes;
  rep.success_rate *= inv;
  rep.collision_rate *= inv;
  rep.fall_rate *= inv;
  rep.timeout_rate *= inv;
  rep.mean_return *= inv;
  rep.mean_length *= inv;
  rep.mean_final_dist *= inv;
  rep.mean_displacement *= inv;
  rep.mean_step_length = steplen_steps > 0
                             ? steplen_sum / steplen_steps
                             : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw ValidationError("grid must be lo:step:hi, got \"" +
                          std::string(spec) + "\"");
  const double lo = parse_double(trim(parts[0]));
  const double step = parse_double(trim(parts[1]));
  const double hi = parse_double(trim(parts[2]));
  if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
  if (!(lo <= hi)) throw ValidationError("grid lo must be <= hi");
  std::vector<double> offsets;
  // Half-step slack so hi itself survives accumulated rounding.
  for (double v = lo; v <= hi + 0.5 * step; v += step)
    offsets.push_back(std::min(v, hi));
  return offsets;
}

RobustnessResult robustness_sweep(const Checkpoint& cp,
                                  const EnvironmentLayout& base,
                                  const std::vector<double>& offsets,
                                  int episodes, bool deterministic) {
  for (double v : offsets)
    if (!std::isfinite(v)) throw ValidationError("grid offsets must be finite");
  base.validate();

  auto inside_ws = [&](double x, double y) {
    return x >= base.ws_xmin && x <= base.ws_xmax && y >= base.ws_ymin &&
           y <= base.ws_ymax;
  };

  RobustnessResult result;
  const int n_targets = 1 + static_cast<int>(base.obstacles.size());
  for (int t = 0; t < n_targets; ++t) {
    for (int axis = 0; axis < 2; ++axis) {
      for (double offset : offsets) {
        RobustnessCell cell;
        cell.target =
            t == 0 ? "destination" : "obstacle" + std::to_string(t - 1);
        cell.axis = axis == 0 ? "x" : "y";
        cell.offset = offset;

        EnvironmentLayout layout = base;
        double* x = t == 0 ? &layout.dest_x : &layout.obstacles[t - 1].x;
        double* y = t == 0 ? &layout.dest_y : &layout.obstacles[t - 1].y;
        *(axis == 0 ? x : y) += offset;

        cell.valid = inside_ws(*x, *y);
        if (cell.valid) {
          try {
            layout.validate();
          } catch (const ValidationError&) {
            cell.valid = false;
          }
        }
        if (cell.valid) {
          auto env = make_environment(cp, layout);
          cell.report = evaluate(cp, *env, episodes, deterministic);
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

std::string robustness_csv(const RobustnessResult& result) {
  std::string out = "target,axis,offset,success,collision,timeout,mean_return\n";
  for (const RobustnessCell& c : result.cells) {
    out += c.target;
    out += ',';
    out += c.axis;
    out += ',';
    out += format_double(c.offset);
    if (c.valid) {
      for (double v : {c.report.success_rate, c.report.collision_rate,
                       c.report.timeout_rate, c.report.mean_return}) {
        out += ',';
        out += format_double(v);
      }
    } else {
      out += ",,,,";
    }
    out += '\n';
  }
  return out;
}

PlotData plot_data(const MetricsTable& metrics) {
  PlotData out;
  if (metrics.rows.empty()) return out;

  const int cs = metrics.column("env_steps");
  const int cr = metrics.column("mean_return");
  const int cl = metrics.column("mean_length");
  if (cs < 0 || cr < 0 || cl < 0)
    throw ValidationError(
        "metrics lack env_steps/mean_return/mean_length columns");

  const std::size_t n = metrics.rows.size();
  const std::size_t buckets = std::min<std::size_t>(200, n);
  auto series = [&](int col) {
    std::string s;
    for (std::size_t b = 0; b < buckets; ++b) {
      const std::size_t lo = b * n / buckets;
      const std::size_t hi = (b + 1) * n / buckets;
      double sx = 0.0, sy = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        sx += metrics.rows[i][cs];
        sy += metrics.rows[i][col];
      }
      const double m = static_cast<double>(hi - lo);
      s += format_double(sx / m);
      s += ' ';
      s += format_double(sy / m);
      s += '\n';
    }
    return s;
  };
  out.return_vs_steps = series(cr);
  out.length_vs_steps = series(cl);
  return out;
}

}  // namespace walklab
