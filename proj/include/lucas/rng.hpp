#pragma once

#include <cstdint>
#include <limits>

namespace lucas {

/// SplitMix64 finalizer; used to derive well-separated seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream `index` under `master_seed`.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  std::uint64_t s = master_seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

/// xoshiro256++ seeded through SplitMix64. Satisfies UniformRandomBitGenerator
/// and is cheap to construct, so every simulated path owns one.
class PathRng {
public:
  using result_type = std::uint64_t;

  PathRng(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
    std::uint64_t s = substream_seed(master_seed, path_index);
    for (auto& word : state_) word = splitmix64(s);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace lucas
