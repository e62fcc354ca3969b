#include "puk/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace puk {

DhdModel::DhdModel(double eta_in) : eta(eta_in) {
  if (!(eta >= 0.5 && eta < 1.0))
    throw std::invalid_argument("dhd model: eta must lie in [0.5, 1)");
}

double DhdModel::per_axis_sd() const { return 1.0 / std::sqrt(eta); }

QuadPoint sample_dhd_one(QuadPoint mean, const DhdModel& model, RandomStream& rng) {
  const double sd = model.per_axis_sd();
  const double x = mean.x + rng.normal() * sd;
  const double y = mean.y + rng.normal() * sd;
  return {x, y};
}

std::vector<QuadPoint> sample_dhd(QuadPoint mean, const DhdModel& model,
                                  std::int64_t count, RandomStream& rng) {
  if (count < 1) throw std::invalid_argument("sample dhd: count must be >= 1");
  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(sample_dhd_one(mean, model, rng));
  return out;
}

MeanEstimate estimate_mean(std::span<const QuadPoint> samples, const DhdModel& model) {
  if (samples.empty()) throw std::invalid_argument("estimate mean: empty sample sequence");
  double sx = 0.0, sy = 0.0;
  for (const QuadPoint& z : samples) {
    sx += z.x;
    sy += z.y;
  }
  const double m = static_cast<double>(samples.size());
  MeanEstimate est;
  est.center = {sx / m, sy / m};
  est.probes = static_cast<std::int64_t>(samples.size());
  est.per_axis_sd = model.per_axis_sd() / std::sqrt(m);
  return est;
}

}  // namespace puk
