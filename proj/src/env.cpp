#include "walklab/env.hpp"

#include <sstream>

namespace walklab {

const char* term_reason_name(TermReason r) {
  switch (r) {
    case TermReason::none: return "none";
    case TermReason::goal: return "goal";
    case TermReason::collision: return "collision";
    case TermReason::fall: return "fall";
    case TermReason::timeout: return "timeout";
    case TermReason::divergence: return "divergence";
  }
  return "unknown";
}

int ObservationLayout::total_dim() const {
  int n = 0;
  for (const auto& s : segments) n += s.dim;
  return n;
}

std::string ObservationLayout::describe() const {
  std::ostringstream os;
  for (const auto& s : segments)
    os << s.name << "[" << s.dim << "]/" << s.scale << " ";
  return os.str();
}

int diag_index(const Environment& env, const std::string& name) {
  const auto& keys = env.diagnostics();
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace walklab
