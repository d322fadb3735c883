#pragma once

#include <cstdint>
#include <random>

namespace advloss::rng {

// splitmix64 finalizer. Used both as a stand-alone mixer and to derive
// child seeds for parallel work units.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child-seed scheme for Monte-Carlo work units: a master seed plus a
// (stream, index) pair map to one 64-bit seed. The derivation depends only
// on the indices, never on scheduling, so any partition of the work across
// workers reproduces the same per-unit randomness.
//
//   child = mix64( mix64(master ^ mix64(stream + 1)) ^ mix64(index + 1) )
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t index) {
  return mix64(mix64(master ^ mix64(stream + 1)) ^ mix64(index + 1));
}

// Deterministic uniform generator. std::mt19937_64 output is fixed by the
// standard; the float conversion below is explicit (53-bit mantissa) so the
// stream is identical across standard library implementations, unlike
// std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). Rejection against the top multiple of n,
  // so the result is exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  bool coin() { return (gen_() & 1ULL) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace advloss::rng
