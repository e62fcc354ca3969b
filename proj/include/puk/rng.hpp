#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>

namespace puk {

// splitmix64 step (Steele, Lea, Flood 2014). Used only to spread seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based substream labels: (master, k) and (master, k') map to
// decorrelated seeds for any k != k', so parallel work items can draw from
// independent streams while the whole run stays a pure function of `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  const std::uint64_t a = splitmix64_next(s);
  const std::uint64_t b = splitmix64_next(s);
  return a ^ (b >> 1);
}

// Seeded random stream with reproducible output across platforms and runs.
//
// The engine is std::mt19937_64 (its sequence is pinned by the standard);
// the distributions are implemented here because the std:: distribution
// adaptors are implementation-defined and would break bit-level determinism.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream `index`; independent of this stream's draw position.
  RandomStream substream(std::uint64_t index) const {
    return RandomStream(derive_seed(seed_, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via the Marsaglia polar transform; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Circular complex Gaussian with E|z|^2 = total_variance.
  std::complex<double> complex_gaussian(double total_variance) {
    const double sd = std::sqrt(0.5 * total_variance);
    const double re = normal();
    const double im = normal();
    return {re * sd, im * sd};
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace puk
