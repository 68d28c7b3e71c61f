#pragma once

#include <cstdint>
#include <random>

namespace ioi {

/// Seeded uniform stream on the open interval (0,1).
///
/// Built directly on mt19937_64 output bits so the sequence is identical on
/// every standard library (std::uniform_real_distribution is not).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(next() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ioi
