#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "puk/rng.hpp"

namespace puk {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Reduce an angle to [0, 2*pi).
inline double canonical_phase(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// A point in the quadrature phase plane.
struct QuadPoint {
  double x = 0.0;
  double y = 0.0;
};

// SLM phase configuration: one phase per input mode, each in [0, 2*pi).
class PhaseMask {
 public:
  PhaseMask() = default;
  explicit PhaseMask(std::vector<double> phases);

  // Independent uniform phases on [0, 2*pi).
  static PhaseMask random(int modes, RandomStream& rng);

  int size() const { return static_cast<int>(phases_.size()); }
  double phase(int j) const { return phases_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& phases() const { return phases_; }

 private:
  std::vector<double> phases_;
};

// Reflection matrix of a scattering key. Rows are output (target) modes,
// columns input modes; entries are dimensionless reflection coefficients.
class PukKey {
 public:
  PukKey(int output_modes, int input_modes, double ell_over_L,
         std::vector<std::complex<double>> entries);

  // Fresh random key: every entry is an independent circular complex
  // Gaussian with E|r|^2 = (1 - l/L) / N, the unique normalization for
  // which the ensemble response variance comes out as 2*mu*V.
  static PukKey random(int output_modes, int input_modes, double ell_over_L,
                       RandomStream& rng);

  int output_modes() const { return output_modes_; }
  int input_modes() const { return input_modes_; }
  double ell_over_L() const { return ell_over_L_; }

  std::complex<double> entry(int s, int j) const {
    return entries_[static_cast<std::size_t>(s) * input_modes_ + j];
  }
  std::span<const std::complex<double>> row(int s) const;
  const std::vector<std::complex<double>>& entries() const { return entries_; }

  // Content fingerprint: hex SHA-256 over the dimensions and the raw
  // little-endian entry bytes. Keys are immutable, so the digest is computed
  // on first use and cached; concurrent callers are fine.
  const std::string& fingerprint() const;

 private:
  struct FingerprintCache;

  int output_modes_;
  int input_modes_;
  double ell_over_L_;
  std::vector<std::complex<double>> entries_;  // row-major
  std::shared_ptr<FingerprintCache> fingerprint_cache_;
};

// Mean scattered field of target mode `s` under the given mask, for a probe
// with mean photon number `mu` and end-to-end transmittance `tau`:
//   <b_s> = sqrt(mu * tau / N) * sum_j r_{s,j} exp(i phi_j).
std::complex<double> mean_field(const PukKey& key, const PhaseMask& mask,
                                int s, double mu, double tau);

// (<X>, <Y>) = (sqrt(2) Re<b>, sqrt(2) Im<b>).
QuadPoint mean_quadratures(std::complex<double> field);

}  // namespace puk
