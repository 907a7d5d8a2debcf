#pragma once

// Deterministic counter-derived random streams.
//
// Every stochastic routine takes an RngStream addressed by (seed, key...).
// A stream's output depends only on its address, never on evaluation order,
// so threaded experiment runs reproduce single-threaded ones bit for bit and
// paired designs can replay the identical stream for each arm.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ccs {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t key0 = 0,
                     std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
    // Whiten (seed, keys) into seed material; splitmix decorrelates
    // addresses that differ in a single bit.
    std::uint64_t s = seed;
    const std::uint64_t keys[3] = {key0, key1, key2};
    std::uint64_t material[8];
    for (int i = 0; i < 8; ++i) {
      s ^= keys[i % 3] + 0x632be59bd9b4e019ull * static_cast<std::uint64_t>(i + 1);
      material[i] = detail::splitmix64(s);
    }
    std::seed_seq seq(std::begin(material), std::end(material));
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal, Box-Muller; the second deviate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ccs
