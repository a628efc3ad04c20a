#pragma once

#include <cstdint>

namespace sawdil {

// Counter-based SplitMix64. The whole generator state is the counter, so a
// checkpoint only has to record one integer, and streams seeded with
// distinct values are independent for practical purposes.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed = 0) : counter_(seed) {}

  static SplitMix64 from_counter(std::uint64_t counter) { return SplitMix64(counter); }

  std::uint64_t operator()() {
    counter_ += kIncrement;
    std::uint64_t z = counter_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  // Identical on every platform, unlike std::uniform_int_distribution.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const SplitMix64&, const SplitMix64&) = default;

 private:
  std::uint64_t counter_;
};

// Seed of chain `chain_id` under a master seed.
inline std::uint64_t chain_seed(std::uint64_t master_seed, std::uint64_t chain_id) {
  return master_seed ^ chain_id;
}

}  // namespace sawdil
