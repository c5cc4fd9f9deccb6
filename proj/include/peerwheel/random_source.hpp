#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace peerwheel {

/// Seeded deterministic generator (xoshiro256**, state expanded from the
/// 64-bit seed with splitmix64). The output sequence is fixed for a given
/// seed on every platform.
///
/// Also models UniformRandomBitGenerator so it can drive <random>
/// distributions in tests.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Independent stream for (master seed, a, b), e.g. (seed, node, round).
  /// Depends only on its arguments, never on draw order elsewhere.
  static RandomSource substream(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = master;
    std::uint64_t mixed = splitmix64(s);
    s = mixed ^ (a * 0xD1B54A32D192ED03ULL);
    mixed = splitmix64(s);
    s = mixed ^ (b * 0x8CB92BA72F3D8DD7ULL);
    return RandomSource(splitmix64(s));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer on [0, bound). Multiply-shift with rejection of the
  /// short low interval, so there is no modulo bias. bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform_real() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace peerwheel
