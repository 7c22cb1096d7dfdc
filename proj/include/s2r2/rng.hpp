#pragma once

#include <cstdint>
#include <string_view>

namespace s2r2 {

// SplitMix64. Chosen over std::mt19937_64 because the standard library
// distributions are not bit-reproducible across implementations; this
// generator plus the two reductions below fully pin the byte stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1): top 53 bits scaled by 2^-53. Exact integer
  // arithmetic, so comparisons against a rate are platform-independent.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n). Modulo reduction, documented as part of
  // the draw protocol; the bias at n << 2^64 is irrelevant here.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (caches the second deviate).
  double next_normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a 64-bit. Used to derive per-record seeds: seed ^ fnv1a64(id).
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace s2r2
