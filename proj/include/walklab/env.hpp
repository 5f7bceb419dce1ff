#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "walklab/rng.hpp"

namespace walklab {

// Fixed per-episode step cap shared by all environments.
inline constexpr int kEpisodeCap = 400;

enum class TermReason : uint8_t {
  none = 0,
  goal = 1,
  collision = 2,
  fall = 3,
  timeout = 4,
  divergence = 5,
};

const char* term_reason_name(TermReason r);

struct StepResult {
  std::vector<double> obs;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  TermReason reason = TermReason::none;
  // Scalar diagnostics aligned with Environment::diagnostics(); reward-term
  // breakdowns use an "rt_" name prefix.
  std::vector<double> info;
};

struct ObsSegment {
  std::string name;
  int dim = 0;
  double scale = 1.0;  // raw value is divided by this

  bool operator==(const ObsSegment&) const = default;
};

// Frozen observation schema: ordered named segments with fixed scale factors.
// Serialized into checkpoints so evaluation can verify policy/environment
// compatibility.
struct ObservationLayout {
  std::vector<ObsSegment> segments;

  int total_dim() const;
  std::string describe() const;
  bool operator==(const ObservationLayout&) const = default;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual const ObservationLayout& obs_layout() const = 0;
  virtual int action_dim() const = 0;

  // Names for StepResult::info entries, fixed at construction.
  virtual const std::vector<std::string>& diagnostics() const = 0;

  virtual StepResult reset(SplitRng& rng) = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  // Optional per-step trajectory dump support (empty = unsupported).
  virtual std::vector<std::string> trajectory_columns() const { return {}; }
  virtual std::vector<double> trajectory_row() const { return {}; }
};

// Shared helper: index of a named diagnostic, -1 if absent.
int diag_index(const Environment& env, const std::string& name);

}  // namespace walklab
