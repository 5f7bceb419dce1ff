#pragma once

#include <cstdint>
#include <initializer_list>

namespace walklab {

// Counter-based splittable generator. Every stream is (key, counter); the
// n-th output is a pure function of both, so streams can be re-derived from
// the master seed at any point instead of being carried through checkpoints.
// derive() folds a list of labels (update index, worker index, role) into a
// fresh key, giving independent streams for parallel rollout workers.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : key_(mix(seed + kGolden)) {}

  // Independent child stream labelled by `labels`. Same parent + labels
  // always yields the same stream.
  SplitRng derive(std::initializer_list<uint64_t> labels) const {
    uint64_t k = key_;
    for (uint64_t v : labels) k = mix(k ^ mix(v + kGolden));
    return SplitRng(k, 0);
  }

  uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. Draws two uniforms per call and keeps no
  // spare, so the stream state stays (key, counter) only.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return box_muller(u1, u2);
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  SplitRng(uint64_t key, uint64_t counter) : key_(key), counter_(counter) {}

  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // splitmix64 finalizer.
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static double box_muller(double u1, double u2);

  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace walklab
