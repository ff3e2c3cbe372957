#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

namespace specmatch {

/// splitmix64 finalizer; bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Random substream for one allocation instant. The engine seed is a pure
/// function of (master_seed, instant_index), so streams can be created in
/// any order, on any worker, and replay identically. All draws go through
/// explicit bounded sampling to stay platform-independent (distribution
/// classes from <random> are implementation-defined).
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t instant_index)
      : master_seed_(master_seed),
        instant_index_(instant_index),
        engine_(substream_seed(master_seed, instant_index)) {}

  static std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t instant_index) {
    return mix64(mix64(master_seed) ^ (0x9E3779B97F4A7C15ull * (instant_index + 1)));
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t instant_index() const { return instant_index_; }

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw from [0, bound) via rejection from the top.
  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t threshold = (0ull - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t raw = engine_();
      if (raw >= threshold) return raw % bound;
    }
  }

  /// Fisher-Yates shuffle; uniform over all permutations.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t instant_index_;
  std::mt19937_64 engine_;
};

}  // namespace specmatch
