#pragma once

// Counter-based hashing shared by weight fields, replica seeding and the
// annealer's move generator.

#include <bit>
#include <cstdint>

namespace gla {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t seed_salt(std::uint64_t seed) { return mix64(seed + 0x9e3779b97f4a7c15ULL); }

constexpr std::uint64_t site_hash(std::uint64_t seed, std::uint64_t key) {
  return mix64(key ^ seed_salt(seed));
}

// Top 52 bits mapped to [0, 1).
inline double to_unit(std::uint64_t h) {
  return std::bit_cast<double>((h >> 12) | 0x3FF0000000000000ULL) - 1.0;
}

// Seed of replica r derived from a master seed.
constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t r) { return site_hash(master, r); }

// Small deterministic stream generator (counter mode over mix64).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : salt_(seed_salt(seed)) {}
  std::uint64_t next() { return mix64(counter_++ ^ salt_); }
  double uniform() { return to_unit(next()); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t salt_;
  std::uint64_t counter_ = 0;
};

}  // namespace gla
