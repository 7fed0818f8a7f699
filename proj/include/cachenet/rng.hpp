#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cachenet {

// 64-bit mix used to derive independent stream seeds from one master seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic random stream. The engine is the standardized mt19937_64;
// all draws are derived from raw 64-bit output by hand so that results do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  uint64_t bits() { return engine_(); }

  // Uniform in [0, 1).
  double u01() { return double(bits() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Exponential with the given rate.
  double exponential(double rate) { return -std::log(1.0 - u01()) / rate; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return bits() % n; }

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over a byte string; stable across platforms (used to map external
// string ids to deterministic values).
inline uint64_t fnv1a64(const char* data, size_t len) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t k = 0; k < len; ++k) {
    h ^= uint64_t(uint8_t(data[k]));
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace cachenet
