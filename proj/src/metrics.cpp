#include "walklab/metrics.hpp"

#include <algorithm>

#include "walklab/error.hpp"
#include "walklab/textio.hpp"

namespace walklab {

std::string metrics_header(const std::vector<std::string>& term_names) {
  std::string h =
      "update,env_steps,mean_return,std_return,mean_length,goal,collision,"
      "fall,timeout,divergence,policy_loss,value_loss,entropy,approx_kl";
  for (const std::string& n : term_names) {
    h += ',';
    h += n;
  }
  h += '\n';
  return h;
}

std::string format_metrics_row(const MetricsRow& r) {
  std::string out;
  out += std::to_string(r.update_index);
  out += ',';
  out += std::to_string(r.env_steps);
  for (double v : {r.mean_return, r.std_return, r.mean_length}) {
    out += ',';
    out += format_double(v);
  }
  for (int64_t v : {r.goal, r.collision, r.fall, r.timeout, r.divergence}) {
    out += ',';
    out += std::to_string(v);
  }
  for (double v : {r.policy_loss, r.value_loss, r.entropy, r.approx_kl}) {
    out += ',';
    out += format_double(v);
  }
  for (double v : r.term_means) {
    out += ',';
    out += format_double(v);
  }
  out += '\n';
  return out;
}

int MetricsTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1
                             : static_cast<int>(it - columns.begin());
}

MetricsTable parse_metrics_csv(std::string_view text) {
  MetricsTable t;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (t.columns.empty()) {
      for (auto f : fields) {
        const auto name = trim(f);
        if (name.empty())
          throw ValidationError("line " + std::to_string(line_no) +
                                ": empty column name");
        t.columns.emplace_back(name);
      }
      continue;
    }
    if (fields.size() != t.columns.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.columns.size()) + " fields, got " +
                            std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      try {
        row.push_back(parse_double(trim(f)));
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " +
                              e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

MetricsTable load_metrics_csv(const std::string& path) {
  try {
    return parse_metrics_csv(read_text_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace walklab
