#pragma once

#include <cstdint>

namespace asuq {

// Purpose tags keep draws for different consumers independent under one seed.
enum class Stream : std::uint64_t {
  Sample = 1,
  Bootstrap = 2,
  Cdf = 3,
  GradientOracle = 4,
  Direction = 5,
  Noise = 6,
};

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator. The output sequence is a pure function of
/// (seed, stream, index), so item j of a sample set can be produced on any
/// thread, in any order, or after a restart without changing the result.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index, std::uint64_t sub = 0) noexcept
      : key_(mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ index) ^ mix64(sub + 0x5851f42d4c957f2dULL)) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + 0xd1342543de82ef95ULL * ++counter_); }

  // [0, 1)
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n), Lemire's multiply-and-reject. n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace asuq
