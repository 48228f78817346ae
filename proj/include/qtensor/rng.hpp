#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qten {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Pre-assigned per-work-item seed; independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 output is pinned by the standard; the transforms below avoid
// std distributions, whose sequences vary between library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }        // [0,1)
  double uniform01_pos() { return (double(engine_() >> 11) + 1.0) * 0x1.0p-53; }  // (0,1]

  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform01() * std::log(hi / lo));
  }

  double normal() {
    double u1 = uniform01_pos();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return lo + int(engine_() % std::uint64_t(hi - lo + 1));
  }

  bool coin() { return (engine_() & 1) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qten
