#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace danopt {

// splitmix64 finalizer. Used to derive decorrelated child seeds from a
// master seed; the additive constant is the usual 2^64/phi increment.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child seed for stream `index` under `master`. index is offset by one so
// child_seed(s, 0) != mix of the bare master, keeping the master stream
// usable on its own.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Named sub-streams of a run seed. Adding a consumer must not shift the
// draws of existing ones, hence fixed indices instead of draw order.
enum class SeedStream : std::uint64_t {
  topology = 0,
  partition = 1,
  problem = 2,
  initial_point = 3,
};

inline std::uint64_t stream_seed(std::uint64_t master, SeedStream s) {
  return child_seed(master, static_cast<std::uint64_t>(s));
}

// mt19937_64 with pinned output mappings. std::uniform_* distributions are
// implementation-defined, so every mapping from raw draws to values lives
// here; results are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1). Top 53 bits scaled by 2^-53.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, n). Rejection sampling, no modulo bias. n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x > limit);
    return x % n;
  }

  // Uniform on [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. Draws two uniforms per pair, caches the
  // second value.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = radius * std::sin(two_pi * u2);
    has_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace danopt
