#pragma once

#include <cstdint>
#include <string_view>

// Deterministic, platform-stable hashing. All seeded behaviour in the project
// derives from these functions so that corpora are reproducible byte-for-byte
// across runs and machines (std::hash carries no such guarantee).

namespace salesgen {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// splitmix64 finalizer; good avalanche for cheap integer mixing.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

// Per-item sub-seed derivation, e.g. seed_i = derive_seed(master_seed, i).
inline std::int64_t derive_seed(std::int64_t base, std::uint64_t index) {
  return static_cast<std::int64_t>(hash_combine(static_cast<std::uint64_t>(base), index));
}

// Minimal deterministic PRNG for sampling decisions (uniform picks, shuffles).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n must be > 0. Modulo bias is irrelevant at our scales.
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  double next_unit() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
};

}  // namespace salesgen
