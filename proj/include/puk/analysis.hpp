#pragma once

#include "puk/speckle.hpp"

namespace puk {

// Public setup parameters of the analyzer.
struct SetupParams {
  int input_modes = 0;       // N
  double mu = 0.0;           // mean photon number of a probe
  double tau = 0.0;          // end-to-end transmittance
  double ell_over_L = 0.0;   // mean free path over thickness
  double eta = 0.0;          // detection efficiency, [0.5, 1)
  double w = 0.0;            // acceptance-region full width (quadrature units)
  double enhancement = 1.0;  // declared enhancement factor E, >= 1

  void validate() const;
  double speckle_v() const;  // V = (tau / N) * (1 - l/L)
  double w_tilde() const;    // w * sqrt(eta)
};

// Axis-aligned square [x +- w/2] x [y +- w/2].
struct AcceptRegion {
  QuadPoint center;
  double width = 0.0;

  bool contains(QuadPoint z) const {
    return std::fabs(z.x - center.x) <= 0.5 * width &&
           std::fabs(z.y - center.y) <= 0.5 * width;
  }
};

// Radius of the disorder-ensemble response cloud: rho = 4 sqrt(mu V).
double rho(const SetupParams& params);

// Optimized-response radius scale: rho_o = sqrt(E mu V).
double rho_opt(const SetupParams& params);

// Detection-scaled separation Delta = (rho_o - rho) sqrt(eta);
// negative when E < 16.
double delta_separation(const SetupParams& params);

// Smallest mean photon number achieving delta >= omega:
// mu = omega^2 / (eta V (sqrt(E) - 4)^2). Requires E > 16.
double critical_mu(double omega, const SetupParams& params);

// Probability that one DHD outcome sampled around `mean` lands in `region`
// (product of the per-axis erf brackets; width comes from the region, the
// detector efficiency from `params`).
double p_in(const AcceptRegion& region, QuadPoint mean, const SetupParams& params);

// p_in with zero displacement: [erf(w_tilde / (2 sqrt(2)))]^2.
double p_in_opt(const SetupParams& params);

// Maximum of p_in over response placements |Ztilde| = rho_o, |mean| = rho:
// (1/4) [erf(w_tilde/(2 sqrt 2) + Delta/2) + erf(w_tilde/(2 sqrt 2) - Delta/2)]^2.
double p_in_max(const SetupParams& params);

// Probability that more than half of `nu` Bernoulli(p) trials succeed;
// `nu` must be odd so ties cannot occur.
double majority_prob(double p, int nu);

}  // namespace puk
