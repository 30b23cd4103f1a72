#pragma once

#include <cmath>
#include <cstdint>

namespace cpmon {

// Weyl increment used by the splitmix64 stream.
inline constexpr std::uint64_t kRngIncrement = 0x9e3779b97f4a7c15ull;

// splitmix64 output scramble; a bijection on 64-bit words.
inline std::uint64_t mix_bits(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double bits_to_unit(std::uint64_t bits) noexcept {  // [0, 1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double bits_to_open_unit(std::uint64_t bits) noexcept {  // (0, 1)
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Sequential splitmix64 engine with hand-rolled distribution transforms.
// The <random> distributions are implementation-defined, so seeded outputs
// would not survive a standard-library upgrade; these transforms pin the
// exact draw sequence.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kRngIncrement;
    return mix_bits(state_);
  }

  double uniform() noexcept { return bits_to_unit(next_u64()); }
  double uniform_open() noexcept { return bits_to_open_unit(next_u64()); }

  // Uniform index in [0, n). Modulo bias is negligible for n << 2^64.
  std::size_t uniform_index(std::size_t n) noexcept {
    return static_cast<std::size_t>(next_u64() % n);
  }

  // Box-Muller standard normal.
  double normal() noexcept {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Marsaglia-Tsang gamma sampler, unit scale.
  double gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

// Fixed stream tags so independent draw sequences inside one command can
// never collide.
enum class RngStream : std::uint64_t {
  calibration_scores = 1,
  calibration_baseline = 2,
  coverage = 3,
  predict = 4,
  monitor = 5,
  simulate = 6,
};

// Counter-mode uniforms: draw i is a pure function of (seed, stream, i),
// so parallel or reordered evaluation cannot change which u a sample gets.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, RngStream stream) noexcept
      : base_(mix_bits(mix_bits(seed) +
                       kRngIncrement * static_cast<std::uint64_t>(stream))) {}

  std::uint64_t key(std::uint64_t index) const noexcept {
    return mix_bits(base_ + kRngIncrement * index);
  }

  double uniform(std::uint64_t index) const noexcept {
    return bits_to_unit(key(index));
  }

 private:
  std::uint64_t base_;
};

// Derives an independent sub-seed, for splitting one user seed across the
// stages of a composite run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix_bits(mix_bits(seed) ^ mix_bits(tag + 1));
}

}  // namespace cpmon
