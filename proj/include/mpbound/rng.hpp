#pragma once

#include <cstdint>
#include <random>

namespace mpbound {

/// Seeded generator with platform-independent draws.
///
/// std::uniform_int_distribution is implementation-defined, so bounded draws
/// are taken directly from the mt19937_64 stream to keep certificates
/// byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform value in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // rejection sampling removes modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mpbound
