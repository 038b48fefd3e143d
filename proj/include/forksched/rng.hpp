#pragma once

#include <cstdint>

namespace forksched {

// SplitMix64 finalizer, used as a stateless 64-bit hash.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v));
}

// Counter-based uniform stream: draw i depends only on (key, i), so every
// draw is reproducible regardless of evaluation order or thread assignment.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform_at(std::uint64_t index) const {
    const std::uint64_t bits = mix64(key_ ^ mix64(index));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_uniform() { return uniform_at(counter_++); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Substream for one (run, task, stage) cell of a Monte Carlo experiment;
// replica p consumes the stream's p-th value.
inline RngStream substream(std::uint64_t seed, std::uint64_t run,
                           std::uint64_t task, std::uint64_t stage) {
  std::uint64_t k = key_combine(seed, run);
  k = key_combine(k, task);
  k = key_combine(k, stage);
  return RngStream(k);
}

}  // namespace forksched
