#include "puk/wavefront.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace puk {
namespace {

PhaseMask conjugate_mask(const PukKey& key, int s, int levels) {
  const auto row = key.row(s);
  std::vector<double> phases(row.size());
  if (levels == 0) {
    for (std::size_t j = 0; j < row.size(); ++j)
      phases[j] = canonical_phase(-std::arg(row[j]));
  } else {
    const double step = kTwoPi / levels;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double target = canonical_phase(-std::arg(row[j]));
      const long k = std::lround(target / step) % levels;
      phases[j] = static_cast<double>(k) * step;
    }
  }
  return PhaseMask(std::move(phases));
}

PhaseMask sequential_mask(const PukKey& key, int s, int levels, int sweeps) {
  const auto row = key.row(s);
  const int n = static_cast<int>(row.size());
  std::vector<double> phases(row.size(), 0.0);
  const double step = (levels > 0) ? kTwoPi / levels : 0.0;

  auto term = [&](int j) {
    const double p = phases[static_cast<std::size_t>(j)];
    return row[static_cast<std::size_t>(j)] * std::complex<double>{std::cos(p), std::sin(p)};
  };

  std::complex<double> sum{0.0, 0.0};
  for (int j = 0; j < n; ++j) sum += term(j);

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    // Refresh the running sum once per sweep to stop drift accumulating.
    sum = {0.0, 0.0};
    for (int j = 0; j < n; ++j) sum += term(j);

    double max_move = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::complex<double> rest = sum - term(j);
      const double old_phase = phases[static_cast<std::size_t>(j)];
      double best;
      if (levels == 0) {
        best = canonical_phase(std::arg(rest) - std::arg(row[static_cast<std::size_t>(j)]));
      } else {
        best = 0.0;
        double best_norm = -1.0;
        for (int k = 0; k < levels; ++k) {
          const double cand = k * step;
          const std::complex<double> b =
              rest + row[static_cast<std::size_t>(j)] *
                         std::complex<double>{std::cos(cand), std::sin(cand)};
          const double norm = std::norm(b);
          if (norm > best_norm) {
            best_norm = norm;
            best = cand;
          }
        }
      }
      phases[static_cast<std::size_t>(j)] = best;
      sum = rest + term(j);
      double move = std::fabs(best - old_phase);
      move = std::min(move, kTwoPi - move);
      max_move = std::max(max_move, move);
    }
    if (max_move < 1e-13) break;
  }

  if (levels == 0) {
    // Fix the global-phase gauge: rotate so <b_s> lands on the positive real
    // axis, matching the conjugate_exact solution.
    const double theta = std::arg(sum);
    for (double& p : phases) p = canonical_phase(p - theta);
  }
  return PhaseMask(std::move(phases));
}

}  // namespace

void OptimizationPolicy::validate() const {
  if (phase_levels != 0 && phase_levels < 2)
    throw std::invalid_argument("optimization policy: phase_levels must be 0 or >= 2");
  if (method == OptimizeMethod::sequential_coordinate && iterations < 1)
    throw std::invalid_argument("optimization policy: iterations must be >= 1");
}

PhaseMask optimize_mask(const PukKey& key, int s, const OptimizationPolicy& policy) {
  policy.validate();
  if (s < 0 || s >= key.output_modes())
    throw std::out_of_range("optimize mask: target mode out of range");
  switch (policy.method) {
    case OptimizeMethod::conjugate_exact:
      return conjugate_mask(key, s, policy.phase_levels);
    case OptimizeMethod::sequential_coordinate:
      return sequential_mask(key, s, policy.phase_levels, policy.iterations);
  }
  throw std::invalid_argument("optimize mask: unknown method");
}

double enhancement(const PukKey& key, const PhaseMask& mask, int s,
                   double mu, double tau) {
  const double v = tau / key.input_modes() * (1.0 - key.ell_over_L());
  if (!(v > 0.0)) throw std::invalid_argument("enhancement: degenerate parameters (V = 0)");
  const std::complex<double> b = mean_field(key, mask, s, mu, tau);
  const QuadPoint z = mean_quadratures(b);
  return (z.x * z.x + z.y * z.y) / (2.0 * mu * v);
}

}  // namespace puk
