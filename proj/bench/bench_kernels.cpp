// Times the serial reference kernels against their OpenMP counterparts and
// checks that both backends return identical results while at it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "puk/mc.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

void report(const std::string& name, double t_serial, double t_parallel, bool identical) {
  std::printf("%-22s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n",
              name.c_str(), t_serial, t_parallel, t_serial / t_parallel,
              identical ? "identical" : "MISMATCH");
}

template <typename Fn>
auto timed(Fn&& fn, double* out) {
  const auto t0 = Clock::now();
  auto result = fn();
  *out = seconds(t0, Clock::now());
  return result;
}

}  // namespace

int main() {
  using namespace puk;

  AnalyzerConfig cfg;
  cfg.setup.input_modes = 256;
  cfg.setup.mu = 1500.0;
  cfg.setup.tau = 0.05;
  cfg.setup.ell_over_L = 0.2;
  cfg.setup.eta = 0.6;
  cfg.setup.w = 8.0 / std::sqrt(0.6);
  cfg.setup.enhancement = 201.3;
  cfg.n = 256;
  cfg.commit_probes = 1000;
  cfg.reveal_probes = 3;

  {
    mc::SpeckleStatsJob job;
    job.seed = 7;
    job.n_keys = 40000;
    job.output_modes = 2;
    job.input_modes = 625;
    job.ell_over_L = 0.2;
    job.mu = 1500.0;
    job.tau = 0.05;
    double ts = 0.0, tp = 0.0;
    const auto a = timed([&] { return mc::serial::speckle_stats(job); }, &ts);
    const auto b = timed([&] { return mc::openmp::speckle_stats(job); }, &tp);
    report("speckle_stats", ts, tp,
           a.mean_x == b.mean_x && a.var_z == b.var_z && a.within_rho == b.within_rho);
  }

  {
    mc::EnhancementJob job;
    job.seed = 11;
    job.n_keys = 4000;
    job.output_modes = 2;
    job.input_modes = 625;
    job.ell_over_L = 0.2;
    job.mu = 1500.0;
    job.tau = 0.05;
    double ts = 0.0, tp = 0.0;
    const auto a = timed([&] { return mc::serial::enhancement_stats(job); }, &ts);
    const auto b = timed([&] { return mc::openmp::enhancement_stats(job); }, &tp);
    report("enhancement_stats", ts, tp, a.values == b.values);
  }

  {
    RandomStream rng(13);
    const PukKey key = PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
    const Commitment c = commit(5, key, cfg, rng);

    mc::MultiSearchJob job;
    job.seed = 17;
    job.n_keys = 400;
    job.output_modes = cfg.n;
    job.input_modes = cfg.setup.input_modes;
    job.ell_over_L = cfg.setup.ell_over_L;
    job.mask = &c.mask;
    job.region = AcceptRegion{c.estimate.center, cfg.setup.w};
    job.excluded_mode = 5;
    job.config = &cfg;
    double ts = 0.0, tp = 0.0;
    const auto a = timed([&] { return mc::serial::multi_search(job); }, &ts);
    const auto b = timed([&] { return mc::openmp::multi_search(job); }, &tp);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].false_target == b[i].false_target && a[i].p_single == b[i].p_single;
    report("multi_search", ts, tp, same);
  }

  {
    mc::VerifyTrialsJob job;
    job.seed = 19;
    job.mean = {1.0, -2.0};
    job.region = AcceptRegion{{0.0, 0.0}, cfg.setup.w};
    job.eta = cfg.setup.eta;
    job.nu = 3;
    job.trials = 4000000;
    double ts = 0.0, tp = 0.0;
    const auto a = timed([&] { return mc::serial::verify_trials(job); }, &ts);
    const auto b = timed([&] { return mc::openmp::verify_trials(job); }, &tp);
    report("verify_trials", ts, tp, a == b);
  }

  {
    mc::HonestRunJob job;
    job.seed = 23;
    job.sessions = 200;
    job.reveals_per_session = 200;
    job.config = cfg;
    double ts = 0.0, tp = 0.0;
    const auto a = timed([&] { return mc::serial::honest_run(job); }, &ts);
    const auto b = timed([&] { return mc::openmp::honest_run(job); }, &tp);
    report("honest_run", ts, tp, a.accepts == b.accepts && a.trials == b.trials);
  }

  return 0;
}
