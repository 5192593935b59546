#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace precip {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs, broken invariants, unusable configs. CLI exit code 1.
struct ValidationError : Error {
  using Error::Error;
};

// Filesystem and parse failures. CLI exit code 2.
struct IoError : Error {
  using Error::Error;
};

// Non-finite values where finite ones are required. CLI exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG. A splitmix64 counter stream with hand-written
// distribution transforms, so sequences are bit-identical across standard
// libraries and platforms.
class DetRng {
 public:
  explicit DetRng(uint64_t seed) : state_(splitmix64(seed)) {
    for (int i = 0; i < 4; ++i) next_raw();
  }

  static DetRng for_stream(uint64_t seed, uint64_t stream) {
    return DetRng(splitmix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ stream);
  }

  uint64_t next_raw() {
    state_ = splitmix64(state_ + 0x165667b19e3779f9ULL);
    return state_;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  uint64_t uniform_index(uint64_t n) {
    // modulo bias is negligible for n << 2^64 and irrelevant for determinism
    return next_raw() % n;
  }

  // standard normal via Box-Muller, one value per call (no cached spare so
  // that the draw count per event is fixed)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal_clipped(double sigma, double clip_sigmas) {
    const double z = normal();
    const double c = clip_sigmas;
    return sigma * std::fmax(-c, std::fmin(c, z));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace precip
