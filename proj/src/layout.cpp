#include "walklab/layout.hpp"

#include <cmath>

#include "walklab/error.hpp"
#include "walklab/textio.hpp"

namespace walklab {

void EnvironmentLayout::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  for (double v : {dest_x, dest_y, goal_radius, init_x, init_y, ws_xmin, ws_xmax,
                   ws_ymin, ws_ymax, k_destination, k_obstacle, k_initial,
                   w_destination, w_obstacle, w_initial, goal_bonus})
    if (!finite(v)) throw ValidationError("layout has non-finite fields");
  if (!(goal_radius > 0.0)) throw ValidationError("goal radius must be > 0");
  if (!(ws_xmin < ws_xmax && ws_ymin < ws_ymax))
    throw ValidationError("workspace bounds are empty");
  if (!(k_destination > 0.0 && k_obstacle > 0.0 && k_initial > 0.0))
    throw ValidationError("k values must be > 0");
  if (!(w_destination > 0.0))
    throw ValidationError("destination weight must be > 0");
  if (w_obstacle > 0.0) throw ValidationError("obstacle weight must be <= 0");
  if (w_initial > 0.0) throw ValidationError("initial weight must be <= 0");
  if (goal_bonus < 0.0) throw ValidationError("goal bonus must be >= 0");

  auto inside_ws = [&](double x, double y) {
    return x >= ws_xmin && x <= ws_xmax && y >= ws_ymin && y <= ws_ymax;
  };
  if (!inside_ws(init_x, init_y) || !inside_ws(dest_x, dest_y))
    throw ValidationError("initial/destination outside the workspace");

  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Circle& c = obstacles[i];
    if (!finite(c.x) || !finite(c.y) || !(c.r > 0.0))
      throw ValidationError("obstacle " + std::to_string(i) +
                            " has invalid geometry");
    const double d_init = std::hypot(c.x - init_x, c.y - init_y);
    if (d_init <= c.r)
      throw ValidationError("obstacle " + std::to_string(i) +
                            " overlaps the initial position");
    const double d_goal = std::hypot(c.x - dest_x, c.y - dest_y);
    if (d_goal <= c.r + goal_radius)
      throw ValidationError("obstacle " + std::to_string(i) +
                            " overlaps the goal disk");
  }
}

std::vector<DistanceTarget> EnvironmentLayout::distance_targets() const {
  std::vector<DistanceTarget> ts;
  if (w_destination != 0.0) {
    DistanceTarget t;
    t.x = dest_x;
    t.y = dest_y;
    t.k = k_destination;
    t.weight = w_destination;
    t.kind = TargetKind::destination;
    ts.push_back(t);
  }
  if (w_obstacle != 0.0) {
    for (const Circle& c : obstacles) {
      DistanceTarget t;
      t.x = c.x;
      t.y = c.y;
      t.k = k_obstacle;
      t.weight = w_obstacle;
      t.kind = TargetKind::obstacle;
      ts.push_back(t);
    }
  }
  if (w_initial != 0.0) {
    DistanceTarget t;
    t.x = init_x;
    t.y = init_y;
    t.k = k_initial;
    t.weight = w_initial;
    t.kind = TargetKind::initial_position;
    ts.push_back(t);
  }
  return ts;
}

double EnvironmentLayout::workspace_extent() const {
  return std::max(ws_xmax - ws_xmin, ws_ymax - ws_ymin);
}

namespace {

std::vector<double> parse_tuple(const KeyValueLine& kv, std::size_t n) {
  std::vector<std::string_view> parts = split(kv.value, ',');
  if (parts.size() != n)
    throw ValidationError("line " + std::to_string(kv.line_no) + ": '" + kv.key +
                          "' needs " + std::to_string(n) + " comma-separated values");
  std::vector<double> out;
  out.reserve(n);
  for (auto p : parts) out.push_back(parse_double(p));
  return out;
}

}  // namespace

EnvironmentLayout parse_layout(std::string_view text) {
  EnvironmentLayout lo;
  lo.obstacles.clear();
  for (const KeyValueLine& kv : parse_key_values(text)) {
    if (kv.key == "initial") {
      auto v = parse_tuple(kv, 2);
      lo.init_x = v[0];
      lo.init_y = v[1];
    } else if (kv.key == "destination") {
      auto v = parse_tuple(kv, 3);
      lo.dest_x = v[0];
      lo.dest_y = v[1];
      lo.goal_radius = v[2];
    } else if (kv.key == "obstacle") {
      auto v = parse_tuple(kv, 3);
      lo.obstacles.push_back({v[0], v[1], v[2]});
    } else if (kv.key == "workspace") {
      auto v = parse_tuple(kv, 4);
      lo.ws_xmin = v[0];
      lo.ws_xmax = v[1];
      lo.ws_ymin = v[2];
      lo.ws_ymax = v[3];
    } else if (kv.key == "k_destination") {
      lo.k_destination = parse_double(kv.value);
    } else if (kv.key == "k_obstacle") {
      lo.k_obstacle = parse_double(kv.value);
    } else if (kv.key == "k_initial") {
      lo.k_initial = parse_double(kv.value);
    } else if (kv.key == "w_destination") {
      lo.w_destination = parse_double(kv.value);
    } else if (kv.key == "w_obstacle") {
      lo.w_obstacle = parse_double(kv.value);
    } else if (kv.key == "w_initial") {
      lo.w_initial = parse_double(kv.value);
    } else if (kv.key == "goal_bonus") {
      lo.goal_bonus = parse_double(kv.value);
    } else {
      throw ValidationError("line " + std::to_string(kv.line_no) +
                            ": unknown layout key '" + kv.key + "'");
    }
  }
  lo.validate();
  return lo;
}

std::string serialize_layout(const EnvironmentLayout& lo) {
  std::string s;
  auto kv = [&s](std::string_view key, std::initializer_list<double> vals) {
    s += key;
    s += " = ";
    bool first = true;
    for (double v : vals) {
      if (!first) s += ",";
      s += format_double(v);
      first = false;
    }
    s += "\n";
  };
  kv("initial", {lo.init_x, lo.init_y});
  kv("destination", {lo.dest_x, lo.dest_y, lo.goal_radius});
  for (const Circle& c : lo.obstacles) kv("obstacle", {c.x, c.y, c.r});
  kv("workspace", {lo.ws_xmin, lo.ws_xmax, lo.ws_ymin, lo.ws_ymax});
  kv("k_destination", {lo.k_destination});
  kv("k_obstacle", {lo.k_obstacle});
  kv("k_initial", {lo.k_initial});
  kv("w_destination", {lo.w_destination});
  kv("w_obstacle", {lo.w_obstacle});
  kv("w_initial", {lo.w_initial});
  kv("goal_bonus", {lo.goal_bonus});
  return s;
}

EnvironmentLayout load_layout(const std::string& path) {
  try {
    return parse_layout(read_text_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_layout(const EnvironmentLayout& layout, const std::string& path) {
  write_text_file(path, serialize_layout(layout));
}

}  // namespace walklab
