#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "puk/rng.hpp"
#include "puk/speckle.hpp"

namespace puk {

// Dual-homodyne detector: a single outcome is a bivariate normal sample
// around the mean response, with independent axes of standard deviation
// 1/sqrt(eta) each.
struct DhdModel {
  double eta;

  explicit DhdModel(double eta);
  double per_axis_sd() const;
};

struct MeanEstimate {
  QuadPoint center;
  std::int64_t probes = 0;
  double per_axis_sd = 0.0;  // (1/sqrt(eta)) / sqrt(probes)
};

// One DHD outcome; draws x then y from the stream.
QuadPoint sample_dhd_one(QuadPoint mean, const DhdModel& model, RandomStream& rng);

std::vector<QuadPoint> sample_dhd(QuadPoint mean, const DhdModel& model,
                                  std::int64_t count, RandomStream& rng);

// Sample mean of repeated probes; CLT spread per_axis_sd = (1/sqrt(eta))/sqrt(M).
MeanEstimate estimate_mean(std::span<const QuadPoint> samples, const DhdModel& model);

}  // namespace puk
