#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace reachopt {

// Seeded pseudo-random source. Wraps std::mt19937_64 (whose output sequence
// is fixed by the standard) and implements the derived draws itself, because
// the std distributions are allowed to differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  // Independent sub-stream of a master seed, keyed by name. Adding a new
  // stream never changes the draws of an existing one.
  static Rng stream(std::uint64_t master_seed, std::string_view name);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Uniform double in [0, 1).
  double uniform01();

  // k distinct indices from [0, n), in draw order. k is clamped to n.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit finalizer from SplitMix64; used for stable hashing.
std::uint64_t mix64(std::uint64_t x) noexcept;

// FNV-1a over bytes; stable across platforms.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

}  // namespace reachopt
