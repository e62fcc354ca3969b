// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "puk/experiment.hpp"
#include "puk/math.hpp"
#include "puk/mc.hpp"
#include "puk/serialize.hpp"
#include "puk/sha256.hpp"
#include "puk/version.hpp"
#include "test_util.hpp"

using namespace puk;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int id, const std::string& name, bool passed, const std::string& detail) {
  std::printf("%s criterion %2d: %s  [%s]\n", passed ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!passed) ++g_failures;
}

void info(const std::string& line) { std::printf("       %s\n", line.c_str()); }

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

void criterion_1_speckle_statistics() {
  mc::SpeckleStatsJob job;
  job.seed = 0xC1;
  job.n_keys = 10000;
  job.output_modes = 2;
  job.input_modes = 625;
  job.ell_over_L = 0.2;
  job.mu = 1500.0;
  job.tau = 0.05;
  job.s = 0;
  job.mask_per_key = true;
  const auto st = mc::speckle_stats(job, Execution::parallel);

  const bool mean_ok = std::fabs(st.mean_x) <= 3.0 * st.se_x &&
                       std::fabs(st.mean_y) <= 3.0 * st.se_y;
  const bool var_ok = std::fabs(st.var_z - 0.192) <= 0.05 * 0.192;
  report(1, "speckle statistics: mean within 3 SE of origin, Var(Z) = 0.192 +- 5%",
         mean_ok && var_ok,
         "mean = (" + fmt(st.mean_x) + ", " + fmt(st.mean_y) + "), Var(Z) = " +
             fmt(st.var_z));
}

void criterion_2_enhancement_law() {
  bool ok = true;
  std::string detail;
  for (int n_inputs : {256, 625}) {
    mc::EnhancementJob job;
    job.seed = 0xC2;
    job.n_keys = 200;
    job.output_modes = 2;
    job.input_modes = n_inputs;
    job.ell_over_L = 0.2;
    job.mu = 1500.0;
    job.tau = 0.05;
    const auto st = mc::enhancement_stats(job, Execution::parallel);
    const double expected = 1.0 + kPi / 4.0 * (n_inputs - 1);
    ok = ok && std::fabs(st.mean / expected - 1.0) <= 0.03;
    detail += "N=" + std::to_string(n_inputs) + ": E = " + fmt(st.mean) + " vs " +
              fmt(expected) + "; ";
  }

  // iterative optimizer, continuous phases: identical masks to 1e-9 per phase
  double worst_gap = 0.0;
  OptimizationPolicy seq{OptimizeMethod::sequential_coordinate, 0, 30};
  for (int n_inputs : {256, 625}) {
    for (int k = 0; k < 30; ++k) {
      RandomStream rng(derive_seed(0xC2F, static_cast<std::uint64_t>(n_inputs + k)));
      const PukKey key = PukKey::random(2, n_inputs, 0.2, rng);
      const PhaseMask a = optimize_mask(key, 0, {});
      const PhaseMask b = optimize_mask(key, 0, seq);
      for (int j = 0; j < n_inputs; ++j) {
        double d = std::fabs(a.phase(j) - b.phase(j));
        d = std::min(d, kTwoPi - d);
        worst_gap = std::max(worst_gap, d);
      }
    }
  }
  ok = ok && worst_gap <= 1e-9;
  report(2, "enhancement law 1 + (pi/4)(N-1) +- 3%; iterative = exact to 1e-9/phase",
         ok, detail + "max phase gap = " + fmt(worst_gap));
}

void criterion_3_honest_acceptance() {
  AnalyzerConfig cfg = testutil::reference_config(64, 1500.0);
  cfg.n = 4;
  cfg.commit_probes = 1000;
  cfg.reveal_probes = 1;

  const double p = p_in_opt(cfg.setup);
  // frozen oracle value of 1 - erf(2 sqrt 2)^2 (series evaluation)
  const double analytic_diff = std::fabs((1.0 - p) - 1.266809550622427e-4);

  mc::HonestRunJob job;
  job.seed = 0xC3;
  job.sessions = 100;
  job.reveals_per_session = 10000;
  job.config = cfg;
  const auto stats = mc::honest_run(job, Execution::parallel);
  const double freq = static_cast<double>(stats.accepts) / stats.trials;
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(stats.trials));

  const bool ok = analytic_diff <= 1e-12 && std::fabs(freq - p) <= 3.0 * se;
  report(3, "honest acceptance: 1 - p_in_opt = 1.2668e-4; 10^6 reveals within 3 SE",
         ok,
         "1-p = " + fmt(1.0 - p) + ", freq = " + fmt(freq) + ", |diff| = " +
             fmt(std::fabs(freq - p)) + " <= " + fmt(3.0 * se));
}

void criterion_4_pin_vs_monte_carlo() {
  const SetupParams params = testutil::reference_config(625, 1500.0).setup;
  const AcceptRegion region{{0.0, 0.0}, params.w};
  RandomStream placer(0xC4);
  bool ok = true;
  double worst_pull = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double radius = placer.uniform() * 1.2 * params.w;
    const double angle = placer.uniform() * kTwoPi;
    const QuadPoint mean{radius * std::cos(angle), radius * std::sin(angle)};
    const double analytic = p_in(region, mean, params);

    mc::VerifyTrialsJob job;
    job.seed = derive_seed(0xC4F, static_cast<std::uint64_t>(i));
    job.mean = mean;
    job.region = region;
    job.eta = params.eta;
    job.nu = 1;
    job.trials = 1000000;
    const double freq =
        static_cast<double>(mc::verify_trials(job, Execution::parallel)) / job.trials;
    const double se =
        std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / job.trials);
    const double pull = std::fabs(freq - analytic) / se;
    worst_pull = std::max(worst_pull, pull);
    ok = ok && pull <= 3.0;
  }
  report(4, "acceptance integral vs DHD Monte Carlo, 10 means x 10^6 samples, 3 SE",
         ok, "worst |freq - p_in| = " + fmt(worst_pull) + " SE");
}

void criterion_5_bound_maximality() {
  SetupParams params = testutil::reference_config(625, 1500.0).setup;  // E ~ 491
  const double r = rho(params);
  const double ro = rho_opt(params);
  const double pmax = p_in_max(params);

  const int steps = 800;  // step pi/400; pi/4 lands exactly on index 100
  double grid_max = -1.0;
  int arg_i = -1, arg_j = -1;
  bool never_exceeds = true;
  for (int i = 0; i < steps; ++i) {
    const double phi = i * (kTwoPi / steps);
    const AcceptRegion region{{ro * std::cos(phi), ro * std::sin(phi)}, params.w};
    for (int j = 0; j < steps; ++j) {
      const double psi = j * (kTwoPi / steps);
      const double v = p_in(region, {r * std::cos(psi), r * std::sin(psi)}, params);
      if (v > pmax + 1e-12) never_exceeds = false;
      if (v > grid_max) {
        grid_max = v;
        arg_i = i;
        arg_j = j;
      }
    }
  }
  const bool agree = std::fabs(grid_max - pmax) <= 1e-6;
  const bool at_diagonal = (arg_i == arg_j) && (arg_i % 100 == 0) && ((arg_i / 100) % 2 == 1);
  report(5, "max p_in equals the closed form, maximizers at phi = psi = l pi/4",
         agree && at_diagonal && never_exceeds,
         "grid max - formula = " + fmt(grid_max - pmax) + ", argmax = " +
             std::to_string(arg_i) + "/" + std::to_string(arg_j) + " (steps of pi/400)");
}

// Shared state between criteria 6 and 7 (same simulation run).
struct BindingCell {
  int n_inputs = 0;
  double mu = 0.0;
  double emergent = 0.0;
  double single_max = 0.0;
  double all_max = 0.0;
  double p_in_max_bound = 0.0;
  QuadPoint best_mean;
  QuadPoint committed_estimate;
  std::vector<CheatRecord> multi_records;
};

std::vector<BindingCell> run_binding_cells() {
  std::vector<BindingCell> cells;
  const std::vector<int> n_list{256, 625};
  const std::vector<double> mu_list{1000.0, 1500.0, 2000.0, 2650.0};
  std::uint64_t cell_index = 0;
  for (int n_inputs : n_list) {
    for (double mu : mu_list) {
      AnalyzerConfig cfg = testutil::reference_config(n_inputs, mu);
      const std::uint64_t cell_seed = derive_seed(0xC6, cell_index++);

      RandomStream rng(derive_seed(cell_seed, 0));
      const PukKey key =
          PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
      const int secret = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.n)));
      const Commitment c = commit(secret, key, cfg, rng);

      BindingCell cell;
      cell.n_inputs = n_inputs;
      cell.mu = mu;
      cell.emergent = enhancement(key, c.mask, secret, cfg.setup.mu, cfg.setup.tau);
      cell.committed_estimate = c.estimate.center;

      const CheatRecord single = best_false_target(key, secret, c, cfg);
      RandomStream search_rng(derive_seed(cell_seed, 1));
      cell.multi_records =
          multi_puk_search(key, secret, c, 500, cfg, search_rng, Execution::parallel);

      cell.single_max = single.p_single;
      cell.all_max = single.p_single;
      cell.best_mean = single.response;
      for (const auto& rec : cell.multi_records) {
        if (rec.p_single > cell.all_max) {
          cell.all_max = rec.p_single;
          cell.best_mean = rec.response;
        }
      }

      SetupParams bound_params = cfg.setup;
      bound_params.enhancement = cell.emergent;
      cell.p_in_max_bound = p_in_max(bound_params);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void criterion_6_binding(const std::vector<BindingCell>& cells) {
  const SetupParams base = testutil::reference_config(625, 1500.0).setup;
  bool dominance = true;
  bool monotone = true;
  bool mc_ok = true;

  for (const auto& cell : cells) {
    for (int nu : {1, 3, 5}) {
      const double bound = majority_prob(cell.p_in_max_bound, nu);
      const double analytic = majority_prob(cell.all_max, nu);
      if (analytic > bound) dominance = false;

      // >= 10^5 verification trials at the best false mean
      SetupParams params = base;
      params.input_modes = cell.n_inputs;
      params.mu = cell.mu;
      mc::VerifyTrialsJob job;
      job.seed = derive_seed(0xC6F, static_cast<std::uint64_t>(
                                        cell.n_inputs * 100000 + cell.mu * 10 + nu));
      job.mean = cell.best_mean;
      job.region = AcceptRegion{cell.committed_estimate, params.w};
      job.eta = params.eta;
      job.nu = nu;
      job.trials = 100000;
      const double freq =
          static_cast<double>(mc::verify_trials(job, Execution::parallel)) / job.trials;
      if (freq > bound) mc_ok = false;
      const double p_best = majority_prob(
          p_in(job.region, cell.best_mean, params), nu);
      const double se = std::sqrt(std::max(p_best * (1.0 - p_best), 1e-12) / job.trials);
      // 3 SE plus a Poisson floor of 3 counts for the deep-tail cells
      if (std::fabs(freq - p_best) > 3.0 * se + 3.0 / job.trials) mc_ok = false;
    }
  }

  // analytic max cheat probability is monotone non-increasing along mu
  for (int n_inputs : {256, 625}) {
    for (int nu : {1, 3, 5}) {
      double prev = 2.0;
      for (const auto& cell : cells) {
        if (cell.n_inputs != n_inputs) continue;
        const double v = majority_prob(cell.all_max, nu);
        if (v > prev) monotone = false;
        prev = v;
      }
    }
  }

  report(6, "binding: empirical max cheat <= analytic bound, monotone in mu",
         dominance && monotone && mc_ok,
         std::string("bound dominance ") + (dominance ? "ok" : "VIOLATED") +
             ", monotone " + (monotone ? "ok" : "VIOLATED") + ", MC " +
             (mc_ok ? "ok" : "VIOLATED"));

  // the strict single-probe operating point, reported against the emergent E
  for (const auto& cell : cells) {
    if (cell.mu != 2650.0) continue;
    const double pc = majority_prob(cell.all_max, 1);
    info("N=" + std::to_string(cell.n_inputs) + ", mu=2650, nu=1: max P_cheat = " +
         fmt(pc) + " (emergent E = " + fmt(cell.emergent) + ") -> '< 1e-3' " +
         (pc < 1e-3 ? "met" : "NOT met (flagged: depends on the achieved enhancement)"));
  }
}

void criterion_7_multi_key_improvement(const std::vector<BindingCell>& cells) {
  bool ok = true;
  std::string detail;
  for (const auto& cell : cells) {
    // the multi-key adversary also holds the reference key, so its option
    // set includes the single-key candidate
    if (cell.all_max < cell.single_max) ok = false;
    if (cell.all_max > cell.p_in_max_bound) ok = false;
  }

  // response-cloud geometry at the two mu = 1500 cells: best responses
  // concentrate near the rho circle and align with the committed estimate.
  for (const auto& cell : cells) {
    if (cell.mu != 1500.0) continue;
    SetupParams params = testutil::reference_config(cell.n_inputs, cell.mu).setup;
    const double r = rho(params);
    const QuadPoint zt = cell.committed_estimate;
    const double zt_norm = std::sqrt(zt.x * zt.x + zt.y * zt.y);
    std::vector<double> radii;
    double cos_sum = 0.0;
    for (const auto& rec : cell.multi_records) {
      const double n =
          std::sqrt(rec.response.x * rec.response.x + rec.response.y * rec.response.y);
      radii.push_back(n / r);
      cos_sum += (rec.response.x * zt.x + rec.response.y * zt.y) / (n * zt_norm);
    }
    std::sort(radii.begin(), radii.end());
    const double median = radii[radii.size() / 2];
    const double mean_cos = cos_sum / static_cast<double>(radii.size());
    // best-of-(n-1) normal projections sit around 3.3-3.7 sigma = 0.8-0.93 rho
    if (median < 0.7 || median > 1.15) ok = false;
    if (mean_cos < 0.8) ok = false;
    detail += "N=" + std::to_string(cell.n_inputs) + ": median |z|/rho = " + fmt(median) +
              ", mean cos = " + fmt(mean_cos) + "; ";
  }

  report(7, "multi-key search: small improvement, below bound, aligned periphery cloud",
         ok, detail);
  for (const auto& cell : cells) {
    if (cell.mu != 1500.0 && cell.mu != 2650.0) continue;
    info("N=" + std::to_string(cell.n_inputs) + ", mu=" + fmt(cell.mu) +
         ": single max = " + fmt(cell.single_max) + ", 500-key max = " +
         fmt(cell.all_max) + ", bound p_in_max = " + fmt(cell.p_in_max_bound));
  }
}

void criterion_8_concealing() {
  mc::ConcealJob job;
  job.seed = 0xC8;
  job.n_commitments = 4000;
  job.config = testutil::reference_config(64, 1500.0);
  job.config.n = 8;
  job.config.commit_probes = 500;
  const auto data = mc::conceal_dataset(job, Execution::parallel);

  // nearest-centroid classifier on standardized features, even/odd split
  const int n_classes = job.config.n;
  const int f = mc::kConcealFeatures;
  std::vector<const mc::ConcealSample*> train, test;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (i % 2 == 0 ? train : test).push_back(&data[i]);
  }
  std::vector<double> mean(f, 0.0), sd(f, 0.0);
  for (const auto* s : train)
    for (int j = 0; j < f; ++j) mean[j] += s->features[j];
  for (int j = 0; j < f; ++j) mean[j] /= static_cast<double>(train.size());
  for (const auto* s : train)
    for (int j = 0; j < f; ++j)
      sd[j] += (s->features[j] - mean[j]) * (s->features[j] - mean[j]);
  for (int j = 0; j < f; ++j)
    sd[j] = std::sqrt(sd[j] / static_cast<double>(train.size())) + 1e-12;

  std::vector<std::vector<double>> centroid(n_classes, std::vector<double>(f, 0.0));
  std::vector<int> count(n_classes, 0);
  for (const auto* s : train) {
    ++count[s->label];
    for (int j = 0; j < f; ++j)
      centroid[s->label][j] += (s->features[j] - mean[j]) / sd[j];
  }
  for (int c = 0; c < n_classes; ++c)
    for (int j = 0; j < f; ++j) centroid[c][j] /= std::max(count[c], 1);

  int correct = 0;
  for (const auto* s : test) {
    int best = 0;
    double best_d = 1e300;
    for (int c = 0; c < n_classes; ++c) {
      double d = 0.0;
      for (int j = 0; j < f; ++j) {
        const double z = (s->features[j] - mean[j]) / sd[j] - centroid[c][j];
        d += z * z;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    if (best == s->label) ++correct;
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  const double chance = 1.0 / n_classes;
  const double se = std::sqrt(chance * (1.0 - chance) / static_cast<double>(test.size()));
  const bool ok = std::fabs(accuracy - chance) <= 3.0 * se;
  report(8, "concealing: commitment classifier performs at chance 1/n within 3 SE", ok,
         "accuracy = " + fmt(accuracy) + " vs chance " + fmt(chance) + " +- " +
             fmt(3.0 * se));
}

void criterion_9_exact_math() {
  double worst_erf = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.003) {
    worst_erf = std::max(worst_erf,
                         std::fabs(math::erf(x) - testutil::erf_reference(x)));
  }
  const bool erf_ok = worst_erf <= 1e-12;

  bool majority_ok = true;
  for (int nu : {1, 3, 5, 7}) {
    for (double p : {0.0, 0.05, 0.25, 0.5, 0.8, 0.997, 1.0}) {
      double brute = 0.0;
      for (unsigned mask = 0; mask < (1u << nu); ++mask) {
        const int successes = __builtin_popcount(mask);
        if (2 * successes <= nu) continue;
        brute += std::pow(p, successes) * std::pow(1.0 - p, nu - successes);
      }
      const double v = majority_prob(p, nu);
      if (std::fabs(v - brute) > 1e-14 * std::max(1.0, std::fabs(brute)))
        majority_ok = false;
    }
  }

  bool round_trip_ok = true;
  SetupParams params = testutil::reference_config(625, 1500.0).setup;
  for (double omega : {0.25, 1.0, 4.0, 8.0, 32.0}) {
    SetupParams p = params;
    p.mu = critical_mu(omega, p);
    if (std::fabs(delta_separation(p) - omega) / omega > 1e-12) round_trip_ok = false;
  }

  report(9, "exact-math oracles: erf 1e-12, majority enumeration, delta round trip",
         erf_ok && majority_ok && round_trip_ok,
         "max erf err = " + fmt(worst_erf) + ", majority " +
             (majority_ok ? "ok" : "VIOLATED") + ", round trip " +
             (round_trip_ok ? "ok" : "VIOLATED"));
}

void criterion_10_determinism() {
  namespace fs = std::filesystem;
  bool ok = true;
  std::string detail;
  for (auto kind : {ExperimentKind::response_map, ExperimentKind::cheat_multi}) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.config = testutil::small_config(32, 8);
    spec.seed = 0xC10;
    spec.replicates = 25;
    spec.search_keys = 25;
    std::vector<std::string> digests;
    for (int r = 0; r < 2; ++r) {
      spec.output_dir =
          fs::temp_directory_path() / ("puk_accept_det_" + kind_name(kind) + std::to_string(r));
      fs::remove_all(spec.output_dir);
      const RunOutput out = ::puk::run(spec);
      std::string all;
      for (const auto& file : out.files) all += read_text_file(file);
      digests.push_back(sha256_hex(all));
    }
    if (digests[0] != digests[1]) ok = false;
    detail += kind_name(kind) + ": " + digests[0].substr(0, 12) + "; ";
  }
  report(10, "determinism: identical spec + seed give byte-identical artifacts", ok,
         detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite (toolkit %s)\n", std::string(kToolkitVersion).c_str());
  criterion_1_speckle_statistics();
  criterion_2_enhancement_law();
  criterion_3_honest_acceptance();
  criterion_4_pin_vs_monte_carlo();
  criterion_5_bound_maximality();
  const auto cells = run_binding_cells();
  criterion_6_binding(cells);
  criterion_7_multi_key_improvement(cells);
  criterion_8_concealing();
  criterion_9_exact_math();
  criterion_10_determinism();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
