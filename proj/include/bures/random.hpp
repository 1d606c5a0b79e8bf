#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bures {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based uniform stream: the output sequence is a pure function of
/// (seed, stream index), so disjoint substreams are deterministic regardless
/// of scheduling. No global state.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream)
      : base_(mix64(mix64(seed) ^ (stream * 0xD6E8FEB86659FD93ull))) {}

  std::uint64_t next_u64() { return mix64(base_ + counter_++ * 0x9E3779B97F4A7C15ull); }

  /// Uniform in (0, 1].
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

/// Standard normal variates by Box-Muller over a UniformStream.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) : uniform_(seed, stream) {}

  /// Uniform in (0,1] drawn from the underlying stream; discards any cached
  /// spare normal so the sequence stays a pure function of the draw order.
  double next_unit() {
    has_spare_ = false;
    return uniform_.next_unit();
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_.next_unit();
    const double u2 = uniform_.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  UniformStream uniform_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bures
