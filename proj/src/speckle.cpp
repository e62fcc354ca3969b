#include "puk/speckle.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

#include "puk/sha256.hpp"

namespace puk {

struct PukKey::FingerprintCache {
  std::once_flag once;
  std::string hex;
};

PhaseMask::PhaseMask(std::vector<double> phases) : phases_(std::move(phases)) {
  for (double& p : phases_) {
    if (!std::isfinite(p)) throw std::invalid_argument("phase mask: non-finite phase");
    p = canonical_phase(p);
  }
}

PhaseMask PhaseMask::random(int modes, RandomStream& rng) {
  if (modes < 1) throw std::invalid_argument("phase mask: modes must be >= 1");
  std::vector<double> phases(static_cast<std::size_t>(modes));
  for (double& p : phases) p = rng.uniform() * kTwoPi;
  return PhaseMask(std::move(phases));
}

PukKey::PukKey(int output_modes, int input_modes, double ell_over_L,
               std::vector<std::complex<double>> entries)
    : output_modes_(output_modes),
      input_modes_(input_modes),
      ell_over_L_(ell_over_L),
      entries_(std::move(entries)),
      fingerprint_cache_(std::make_shared<FingerprintCache>()) {
  if (output_modes_ < 2) throw std::invalid_argument("puk key: need at least 2 output modes");
  if (input_modes_ < 1) throw std::invalid_argument("puk key: need at least 1 input mode");
  if (!(ell_over_L_ > 0.0 && ell_over_L_ < 1.0))
    throw std::invalid_argument("puk key: ell_over_L must lie in (0, 1)");
  const std::size_t expected =
      static_cast<std::size_t>(output_modes_) * static_cast<std::size_t>(input_modes_);
  if (entries_.size() != expected)
    throw std::invalid_argument("puk key: entry count does not match dimensions");
  for (const auto& r : entries_) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      throw std::invalid_argument("puk key: non-finite entry");
  }
}

PukKey PukKey::random(int output_modes, int input_modes, double ell_over_L,
                      RandomStream& rng) {
  if (output_modes < 2) throw std::invalid_argument("gen puk: need at least 2 output modes");
  if (input_modes < 1) throw std::invalid_argument("gen puk: need at least 1 input mode");
  if (!(ell_over_L > 0.0 && ell_over_L < 1.0))
    throw std::invalid_argument("gen puk: ell_over_L must lie in (0, 1)");
  const double entry_variance = (1.0 - ell_over_L) / input_modes;
  std::vector<std::complex<double>> entries(
      static_cast<std::size_t>(output_modes) * static_cast<std::size_t>(input_modes));
  for (auto& r : entries) r = rng.complex_gaussian(entry_variance);
  return PukKey(output_modes, input_modes, ell_over_L, std::move(entries));
}

const std::string& PukKey::fingerprint() const {
  std::call_once(fingerprint_cache_->once, [this] {
    std::vector<std::uint8_t> buf;
    buf.reserve(24 + entries_.size() * 16);
    auto le64 = [&buf](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    auto le_double = [&](double v) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      le64(bits);
    };
    le64(static_cast<std::uint64_t>(output_modes_));
    le64(static_cast<std::uint64_t>(input_modes_));
    le_double(ell_over_L_);
    for (const auto& r : entries_) {
      le_double(r.real());
      le_double(r.imag());
    }
    fingerprint_cache_->hex = sha256_hex(buf);
  });
  return fingerprint_cache_->hex;
}

std::span<const std::complex<double>> PukKey::row(int s) const {
  if (s < 0 || s >= output_modes_)
    throw std::out_of_range("puk key: row index " + std::to_string(s));
  return {entries_.data() + static_cast<std::size_t>(s) * input_modes_,
          static_cast<std::size_t>(input_modes_)};
}

std::complex<double> mean_field(const PukKey& key, const PhaseMask& mask,
                                int s, double mu, double tau) {
  if (s < 0 || s >= key.output_modes())
    throw std::out_of_range("mean field: target mode out of range");
  if (mask.size() != key.input_modes())
    throw std::invalid_argument("mean field: mask length does not match key");
  if (!(mu > 0.0)) throw std::invalid_argument("mean field: mu must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("mean field: tau must lie in (0, 1]");

  std::complex<double> sum{0.0, 0.0};
  const auto row = key.row(s);
  for (int j = 0; j < key.input_modes(); ++j) {
    const double p = mask.phase(j);
    sum += row[static_cast<std::size_t>(j)] * std::complex<double>{std::cos(p), std::sin(p)};
  }
  return sum * std::sqrt(mu * tau / key.input_modes());
}

QuadPoint mean_quadratures(std::complex<double> field) {
  constexpr double kSqrt2 = 1.4142135623730950488;
  return {kSqrt2 * field.real(), kSqrt2 * field.imag()};
}

}  // namespace puk
