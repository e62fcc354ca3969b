#pragma once

#include "puk/speckle.hpp"

namespace puk {

enum class OptimizeMethod { conjugate_exact, sequential_coordinate };

struct OptimizationPolicy {
  OptimizeMethod method = OptimizeMethod::conjugate_exact;
  int phase_levels = 0;  // 0 = continuous, otherwise number of SLM levels (>= 2)
  int iterations = 20;   // max sweeps for sequential_coordinate
  void validate() const;
};

// Phase mask maximizing the intensity of the scattered field at target `s`.
//
// conjugate_exact sets phi_j = -arg(r_{s,j}), the global optimum for
// phase-only control in the linear model. sequential_coordinate emulates the
// experimental procedure: cyclic coordinate ascent on |<b_s>|, starting from
// the flat mask; in the continuous case the result is reduced to the same
// global-phase gauge as conjugate_exact (so the two agree to round-off).
// With phase_levels = q > 0 every phase is restricted to the q uniformly
// spaced levels {0, 2*pi/q, ...} and the best level is chosen per mode.
PhaseMask optimize_mask(const PukKey& key, int s, const OptimizationPolicy& policy);

// Enhancement factor E = |<Z_s>|^2 / (2 mu V) with V = (tau/N)(1 - l/L).
// For a random mask the expectation of the returned value is 1.
double enhancement(const PukKey& key, const PhaseMask& mask, int s,
                   double mu, double tau);

}  // namespace puk
