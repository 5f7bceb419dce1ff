#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace walklab {

// One CSV row per PPO update. Episode statistics cover the episodes that
// finished inside the collection phase; term_means are per-step means of the
// environment's rt_* reward-term diagnostics, in diagnostics() order.
struct MetricsRow {
  int64_t update_index = 0;
  int64_t env_steps = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double mean_length = 0.0;
  int64_t goal = 0;
  int64_t collision = 0;
  int64_t fall = 0;
  int64_t timeout = 0;
  int64_t divergence = 0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  std::vector<double> term_means;
};

// Header for a fixed set of rt_* diagnostic names.
std::string metrics_header(const std::vector<std::string>& term_names);
std::string format_metrics_row(const MetricsRow& row);

// Parsed numeric table; every row must match the header's arity.
struct MetricsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

MetricsTable parse_metrics_csv(std::string_view text);
MetricsTable load_metrics_csv(const std::string& path);

}  // namespace walklab
