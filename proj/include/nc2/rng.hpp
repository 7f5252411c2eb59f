#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nc2 {

// splitmix64 finalizer; used to derive independent streams from one seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> salt) noexcept {
  std::uint64_t h = mix64(seed);
  for (auto s : salt) h = mix64(h ^ s);
  return h;
}

// Deterministic across platforms: mt19937_64 output is specified by the
// standard, and bounded draws use rejection instead of the
// implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nc2
