#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace axd {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// xoshiro256** generator, seeded through splitmix64.
///
/// The full state is four 64-bit words exposed by state(); constructing from
/// a saved state resumes the exact sequence. substream(i) derives an
/// independent generator from the current state and an index without
/// advancing this one, which is how Monte Carlo work is split per trial so
/// that any partition of trials across workers reproduces the same draws.
class Rng {
 public:
  using result_type = std::uint64_t;
  using State = std::array<std::uint64_t, 4>;

  explicit Rng(std::uint64_t seed = 0) noexcept {
    std::uint64_t x = seed;
    for (auto& w : s_) w = detail::splitmix64(x);
  }

  explicit Rng(const State& state) noexcept : s_(state) {
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is a fixed point
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  Rng substream(std::uint64_t index) const noexcept {
    std::uint64_t x = s_[0];
    x = mix(x ^ s_[1]);
    x = mix(x ^ s_[2]);
    x = mix(x ^ s_[3]);
    x = mix(x ^ (index * 0xD1B54A32D192ED03ULL + 1));
    return Rng(x);
  }

  const State& state() const noexcept { return s_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static std::uint64_t mix(std::uint64_t v) noexcept {
    return detail::splitmix64(v);
  }

  State s_{};
};

}  // namespace axd
