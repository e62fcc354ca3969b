#include "puk/adversary.hpp"

#include <stdexcept>

#include "puk/mc.hpp"
#include "puk/serialize.hpp"

namespace puk {

CheatRecord best_false_response(const PukKey& key, const PhaseMask& mask,
                                int excluded, const AcceptRegion& region,
                                const AnalyzerConfig& config) {
  CheatRecord best;
  for (int sp = 0; sp < key.output_modes(); ++sp) {
    if (sp == excluded) continue;
    const QuadPoint z =
        mean_quadratures(mean_field(key, mask, sp, config.setup.mu, config.setup.tau));
    const double p = p_in(region, z, config.setup);
    if (best.false_target < 0 || p > best.p_single) {
      best.false_target = sp;
      best.response = z;
      best.p_single = p;
    }
  }
  best.p_cheat = majority_prob(best.p_single, config.reveal_probes);
  return best;
}

CheatRecord best_false_target(const PukKey& key, int s, const Commitment& commitment,
                              const AnalyzerConfig& config) {
  config.validate();
  if (key.output_modes() < 2)
    throw std::invalid_argument("best false target: need at least 2 output modes");
  if (s < 0 || s >= key.output_modes())
    throw std::out_of_range("best false target: committed mode out of range");
  if (commitment.key_fingerprint != key_fingerprint(key))
    throw std::invalid_argument("best false target: commitment was not produced from this key");

  const AcceptRegion region{commitment.estimate.center, config.setup.w};
  CheatRecord rec = best_false_response(key, commitment.mask, s, region, config);
  rec.key_id = -1;
  return rec;
}

std::vector<CheatRecord> multi_puk_search(const PukKey& reference_key, int s,
                                          const Commitment& commitment,
                                          std::int64_t n_keys,
                                          const AnalyzerConfig& config,
                                          RandomStream& rng, Execution exec) {
  config.validate();
  if (n_keys < 1) throw std::invalid_argument("multi puk search: n_keys must be >= 1");
  if (s < 0 || s >= reference_key.output_modes())
    throw std::out_of_range("multi puk search: committed mode out of range");

  mc::MultiSearchJob job;
  job.seed = rng.seed();
  job.n_keys = n_keys;
  job.output_modes = config.n;
  job.input_modes = config.setup.input_modes;
  job.ell_over_L = config.setup.ell_over_L;
  job.mask = &commitment.mask;
  job.region = AcceptRegion{commitment.estimate.center, config.setup.w};
  job.excluded_mode = s;
  job.config = &config;
  return mc::multi_search(job, exec);
}

std::vector<BoundSweepRow> cheat_bound_sweep(std::span<const double> mu_grid,
                                             std::span<const int> nu_list,
                                             const SetupParams& params) {
  if (!(params.enhancement >= 16.0))
    throw std::domain_error("bound sweep: enhancement below 16 gives no separation");
  std::vector<BoundSweepRow> rows;
  rows.reserve(mu_grid.size() * nu_list.size());
  for (double mu : mu_grid) {
    SetupParams p = params;
    p.mu = mu;
    p.validate();
    const double pmax = p_in_max(p);
    for (int nu : nu_list) {
      rows.push_back({mu, nu, majority_prob(pmax, nu)});
    }
  }
  return rows;
}

}  // namespace puk
