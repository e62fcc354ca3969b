#include "puk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "puk/math.hpp"

namespace puk {
namespace {

constexpr double kInvTwoSqrt2 = 0.35355339059327376220;  // 1 / (2 sqrt 2)
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Per-axis factor of the acceptance integral, already divided by 2.
double axis_bracket(double half_wt, double displacement) {
  return 0.5 * (math::erf(half_wt + displacement) + math::erf(half_wt - displacement));
}

}  // namespace

void SetupParams::validate() const {
  if (input_modes < 1) throw std::invalid_argument("setup: N must be >= 1");
  if (!(mu > 0.0)) throw std::invalid_argument("setup: mu must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("setup: tau must lie in (0, 1]");
  if (!(ell_over_L > 0.0 && ell_over_L < 1.0))
    throw std::invalid_argument("setup: ell_over_L must lie in (0, 1)");
  if (!(eta >= 0.5 && eta < 1.0)) throw std::invalid_argument("setup: eta must lie in [0.5, 1)");
  if (!(w > 0.0)) throw std::invalid_argument("setup: w must be positive");
  if (!(enhancement >= 1.0)) throw std::invalid_argument("setup: enhancement must be >= 1");
  if (!(speckle_v() > 0.0)) throw std::invalid_argument("setup: V must be positive");
}

double SetupParams::speckle_v() const {
  return tau / input_modes * (1.0 - ell_over_L);
}

double SetupParams::w_tilde() const { return w * std::sqrt(eta); }

double rho(const SetupParams& params) {
  return 4.0 * std::sqrt(params.mu * params.speckle_v());
}

double rho_opt(const SetupParams& params) {
  return std::sqrt(params.enhancement * params.mu * params.speckle_v());
}

double delta_separation(const SetupParams& params) {
  return (rho_opt(params) - rho(params)) * std::sqrt(params.eta);
}

double critical_mu(double omega, const SetupParams& params) {
  if (!(omega > 0.0)) throw std::invalid_argument("critical mu: omega must be positive");
  const double root_e = std::sqrt(params.enhancement);
  if (!(root_e > 4.0))
    throw std::domain_error("critical mu: separation unreachable for enhancement <= 16");
  const double d = root_e - 4.0;
  return omega * omega / (params.eta * params.speckle_v() * d * d);
}

double p_in(const AcceptRegion& region, QuadPoint mean, const SetupParams& params) {
  if (!(region.width > 0.0)) throw std::invalid_argument("p_in: region width must be positive");
  const double root_eta = std::sqrt(params.eta);
  const double half_wt = region.width * root_eta * kInvTwoSqrt2;
  const double dx = (region.center.x - mean.x) * root_eta * kInvSqrt2;
  const double dy = (region.center.y - mean.y) * root_eta * kInvSqrt2;
  const double p = axis_bracket(half_wt, dx) * axis_bracket(half_wt, dy);
  return std::clamp(p, 0.0, 1.0);
}

double p_in_opt(const SetupParams& params) {
  const double e = math::erf(params.w_tilde() * kInvTwoSqrt2);
  return std::clamp(e * e, 0.0, 1.0);
}

double p_in_max(const SetupParams& params) {
  const double half_wt = params.w_tilde() * kInvTwoSqrt2;
  const double b = axis_bracket(half_wt, 0.5 * delta_separation(params));
  return std::clamp(b * b, 0.0, 1.0);
}

double majority_prob(double p, int nu) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("majority prob: p must lie in [0, 1]");
  if (nu < 1 || nu % 2 == 0)
    throw std::invalid_argument("majority prob: nu must be odd and >= 1");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (nu == 1) return p;

  const int half = nu / 2;
  if (nu <= 1000) {
    // Ascending-j recurrence on t_j = C(nu, j) (1-p)^j p^(nu-j), Kahan-summed.
    double term = std::pow(p, nu);
    double sum = term;
    double carry = 0.0;
    const double ratio = (1.0 - p) / p;
    for (int j = 0; j < half; ++j) {
      term *= static_cast<double>(nu - j) / static_cast<double>(j + 1) * ratio;
      const double y = term - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    return std::clamp(sum, 0.0, 1.0);
  }

  // Log-domain evaluation for very large nu (p^nu underflows otherwise).
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(static_cast<std::size_t>(half) + 1);
  for (int j = 0; j <= half; ++j) {
    const double lc = std::lgamma(nu + 1.0) - std::lgamma(j + 1.0) - std::lgamma(nu - j + 1.0);
    logs[static_cast<std::size_t>(j)] = lc + j * lq + (nu - j) * lp;
    max_log = std::max(max_log, logs[static_cast<std::size_t>(j)]);
  }
  if (!std::isfinite(max_log)) return 0.0;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - max_log);
  return std::clamp(std::exp(max_log) * acc, 0.0, 1.0);
}

}  // namespace puk
