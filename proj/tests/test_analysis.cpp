#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "puk/analysis.hpp"
#include "puk/mc.hpp"
#include "test_util.hpp"

using namespace puk;

namespace {

constexpr double kPi = 3.14159265358979323846;

SetupParams reference_setup(double enhancement = 491.0) {
  SetupParams p;
  p.input_modes = 625;
  p.mu = 1500.0;
  p.tau = 0.05;
  p.ell_over_L = 0.2;
  p.eta = 0.6;
  p.w = 8.0 / std::sqrt(0.6);
  p.enhancement = enhancement;
  return p;
}

// Outcome-enumeration oracle for the majority vote: sum the probability of
// every length-nu success/failure pattern with a strict majority of successes.
double majority_enumeration(double p, int nu) {
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << nu); ++mask) {
    const int successes = __builtin_popcount(mask);
    if (2 * successes <= nu) continue;
    total += std::pow(p, successes) * std::pow(1.0 - p, nu - successes);
  }
  return total;
}

}  // namespace

TEST_CASE("setup validation") {
  SetupParams p = reference_setup();
  CHECK_NOTHROW(p.validate());
  p.eta = 0.4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = reference_setup();
  p.w = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = reference_setup();
  p.enhancement = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("rho and friends on the reference parameter point") {
  const SetupParams p = reference_setup();
  CHECK(p.speckle_v() == doctest::Approx(6.4e-5).epsilon(1e-14));
  CHECK(p.w_tilde() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(rho(p) == doctest::Approx(1.239354670786373403).epsilon(1e-13));
  CHECK(rho_opt(p) == doctest::Approx(6.865566254869295193).epsilon(1e-13));
  CHECK(delta_separation(p) == doctest::Approx(4.358044753478481211).epsilon(1e-13));
}

TEST_CASE("rho scaling and limits") {
  SetupParams p = reference_setup();
  const double r1 = rho(p);
  p.mu *= 4.0;
  CHECK(rho(p) == doctest::Approx(2.0 * r1).epsilon(1e-14));
  p = reference_setup();
  p.tau = 1e-300;
  CHECK(rho(p) < 1e-140);
}

TEST_CASE("rho_opt algebra") {
  SetupParams p = reference_setup(16.0);
  CHECK(rho_opt(p) == doctest::Approx(rho(p)).epsilon(1e-14));
  CHECK(delta_separation(p) == doctest::Approx(0.0));
  p.enhancement = 10.0;
  CHECK(rho_opt(p) < rho(p));
  CHECK(delta_separation(p) < 0.0);
}

TEST_CASE("delta is monotone in mu when E > 16") {
  SetupParams p = reference_setup(491.0);
  double prev = -1.0;
  for (double mu : {100.0, 500.0, 1000.0, 2000.0, 4000.0}) {
    p.mu = mu;
    const double d = delta_separation(p);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("critical mu") {
  const SetupParams p = reference_setup(491.0);
  CHECK(critical_mu(8.0, p) == doctest::Approx(5054.612435451765149).epsilon(1e-13));
  // quadratic in omega
  CHECK(critical_mu(16.0, p) == doctest::Approx(4.0 * critical_mu(8.0, p)).epsilon(1e-13));
  // omega -> 0 limit
  CHECK(critical_mu(1e-12, p) < 1e-19);
  SetupParams bad = reference_setup(16.0);
  CHECK_THROWS_AS(critical_mu(8.0, bad), std::domain_error);
}

TEST_CASE("round trip: delta(critical_mu(omega)) = omega to 1e-12 relative") {
  SetupParams p = reference_setup(491.0);
  for (double omega : {0.5, 2.0, 8.0, 20.0}) {
    p.mu = critical_mu(omega, p);
    CHECK(std::fabs(delta_separation(p) - omega) / omega < 1e-12);
  }
}

TEST_CASE("p_in at the center with w_tilde = 8") {
  const SetupParams p = reference_setup();
  const AcceptRegion region{{2.0, -3.0}, p.w};
  const double v = p_in(region, {2.0, -3.0}, p);
  CHECK(v == doctest::Approx(0.9998733190449378).epsilon(1e-12));
  CHECK(1.0 - v == doctest::Approx(1.266809550622427e-4).epsilon(1e-9));
  CHECK(p_in_opt(p) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("p_in vanishes with the region") {
  const SetupParams p = reference_setup();
  const AcceptRegion tiny{{0.0, 0.0}, 1e-12};
  CHECK(p_in(tiny, {0.0, 0.0}, p) < 1e-6);
}

TEST_CASE("p_in is monotone non-increasing away from the center") {
  const SetupParams p = reference_setup();
  const AcceptRegion region{{0.0, 0.0}, p.w};
  double prev = 1.0;
  for (double d = 0.0; d < 12.0; d += 0.25) {
    const double v = p_in(region, {d, 0.0}, p);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  prev = 1.0;
  for (double d = 0.0; d < 12.0; d += 0.25) {
    const double v = p_in(region, {0.0, -d}, p);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("p_in agrees with direct Monte Carlo at d in {0, 1, 3}") {
  const SetupParams p = reference_setup();
  const AcceptRegion region{{0.0, 0.0}, p.w};
  for (double d : {0.0, 1.0, 3.0}) {
    const double analytic = p_in(region, {d, 0.0}, p);
    mc::VerifyTrialsJob job;
    job.seed = derive_seed(606, static_cast<std::uint64_t>(d * 1000));
    job.mean = {d, 0.0};
    job.region = region;
    job.eta = p.eta;
    job.nu = 1;
    job.trials = 1000000;
    const double freq =
        static_cast<double>(mc::verify_trials(job, Execution::parallel)) / job.trials;
    const double se = std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / job.trials);
    CHECK(std::fabs(freq - analytic) <= 3.0 * se);
  }
}

TEST_CASE("p_in_opt thresholds") {
  SetupParams p = reference_setup();
  p.w = 7.0 / std::sqrt(p.eta);  // w_tilde = 7
  CHECK(p_in_opt(p) >= 0.999);
  CHECK(p_in_opt(p) == doctest::Approx(0.9990697001490116).epsilon(1e-12));
  p.w = 1e-9;
  CHECK(p_in_opt(p) < 1e-9);
}

TEST_CASE("p_in_max reductions and limits") {
  SetupParams p = reference_setup(16.0);  // delta = 0
  CHECK(p_in_max(p) == doctest::Approx(p_in_opt(p)).epsilon(1e-14));
  // delta -> infinity: bracket cancels
  SetupParams far = reference_setup(491.0);
  far.mu = 1e9;
  CHECK(p_in_max(far) < 1e-12);
}

TEST_CASE("p_in_max equals the grid maximum, attained on the diagonals") {
  const SetupParams p = reference_setup(491.0);
  const double r = rho(p);
  const double ro = rho_opt(p);
  const double pmax = p_in_max(p);

  // phi, psi grid with step pi/40 includes the exact pi/4 multiples.
  const int steps = 80;
  double grid_max = -1.0;
  int arg_i = -1, arg_j = -1;
  for (int i = 0; i < steps; ++i) {
    const double phi = i * (kTwoPi / steps);
    const AcceptRegion region{{ro * std::cos(phi), ro * std::sin(phi)}, p.w};
    for (int j = 0; j < steps; ++j) {
      const double psi = j * (kTwoPi / steps);
      const double v = p_in(region, {r * std::cos(psi), r * std::sin(psi)}, p);
      CHECK(v <= pmax + 1e-12);
      if (v > grid_max) {
        grid_max = v;
        arg_i = i;
        arg_j = j;
      }
    }
  }
  CHECK(std::fabs(grid_max - pmax) <= 1e-6);
  // maximizer at phi = psi = l pi/4, l odd  (pi/4 = 10 grid steps)
  CHECK(arg_i == arg_j);
  CHECK(arg_i % 10 == 0);
  CHECK((arg_i / 10) % 2 == 1);
}

TEST_CASE("aligned diagonal placements never beat p_in_max") {
  const SetupParams p = reference_setup(491.0);
  const double pmax = p_in_max(p);
  RandomStream rng(4040);
  for (int trial = 0; trial < 1000; ++trial) {
    const double phi = rng.uniform() * kTwoPi;
    const AcceptRegion region{
        {rho_opt(p) * std::cos(phi), rho_opt(p) * std::sin(phi)}, p.w};
    const double psi = rng.uniform() * kTwoPi;
    const QuadPoint mean{rho(p) * std::cos(psi), rho(p) * std::sin(psi)};
    CHECK(p_in(region, mean, p) <= pmax + 1e-12);
  }
}

TEST_CASE("majority vote basics") {
  CHECK(majority_prob(0.37, 1) == 0.37);
  CHECK(majority_prob(0.5, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(majority_prob(0.5, 99) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(majority_prob(0.9, 3) == doctest::Approx(0.972).epsilon(1e-14));
  CHECK(majority_prob(0.0, 5) == 0.0);
  CHECK(majority_prob(1.0, 5) == 1.0);
  CHECK_THROWS_AS(majority_prob(0.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(majority_prob(0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(majority_prob(-0.1, 3), std::invalid_argument);
}

TEST_CASE("majority vote matches outcome enumeration for nu <= 7") {
  for (int nu : {1, 3, 5, 7}) {
    for (double p : {0.0, 0.05, 0.3, 0.5, 0.72, 0.9, 0.99, 1.0}) {
      const double expected = majority_enumeration(p, nu);
      CHECK(majority_prob(p, nu) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("majority vote amplification properties") {
  // increasing in p
  double prev = -1.0;
  for (double p = 0.0; p <= 1.0; p += 0.02) {
    const double v = majority_prob(p, 5);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  // above 1/2 grows with nu, below 1/2 shrinks with nu
  for (int nu : {3, 5, 7, 9, 11, 13, 15}) {
    CHECK(majority_prob(0.7, nu) >= majority_prob(0.7, nu - 2) - 1e-15);
    CHECK(majority_prob(0.3, nu) <= majority_prob(0.3, nu - 2) + 1e-15);
  }
}

TEST_CASE("large-nu path stays in [0, 1] and keeps amplifying") {
  const double lo = majority_prob(0.45, 2001);
  const double hi = majority_prob(0.55, 2001);
  CHECK(lo >= 0.0);
  CHECK(lo < 1e-3);
  CHECK(hi <= 1.0);
  CHECK(hi > 0.999);
}

TEST_CASE("probability outputs stay in [0, 1] on random valid inputs") {
  RandomStream rng(909);
  for (int i = 0; i < 2000; ++i) {
    SetupParams p;
    p.input_modes = 1 + static_cast<int>(rng.uniform_int(2000));
    p.mu = 1e-3 + rng.uniform() * 5000.0;
    p.tau = 1e-6 + rng.uniform() * (1.0 - 2e-6);
    p.ell_over_L = 1e-6 + rng.uniform() * (1.0 - 2e-6);
    p.eta = 0.5 + rng.uniform() * 0.499;
    p.w = 1e-3 + rng.uniform() * 30.0;
    p.enhancement = 1.0 + rng.uniform() * 2000.0;
    const double a = p_in_opt(p);
    const double b = p_in_max(p);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    const AcceptRegion region{{rng.normal() * 5, rng.normal() * 5}, p.w};
    const double c = p_in(region, {rng.normal() * 5, rng.normal() * 5}, p);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
}
