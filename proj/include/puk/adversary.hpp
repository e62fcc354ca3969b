#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "puk/exec.hpp"
#include "puk/protocol.hpp"

namespace puk {

// One candidate (key, false target) found during a cheating search.
// key_id is -1 for the reference key itself, otherwise the index of the
// fresh key in a multi-key search. p_single is the analytic in-region
// probability of a single outcome (Monte Carlo is used only to validate it),
// p_cheat the majority-vote amplification at the configured nu.
struct CheatRecord {
  std::int64_t key_id = -1;
  int false_target = -1;
  QuadPoint response;
  double p_single = 0.0;
  double p_cheat = 0.0;
};

// Evaluate the committed mask at every target s' != s of the committed key
// and return the candidate with the largest in-region probability.
// Exhaustive over the n-1 candidates; ties break to the lowest mode index.
CheatRecord best_false_target(const PukKey& key, int s, const Commitment& commitment,
                              const AnalyzerConfig& config);

// The multi-key variant: generate n_keys fresh random keys and find each
// key's best false target under the fixed committed mask. One record per
// key, ordered by key index.
std::vector<CheatRecord> multi_puk_search(const PukKey& reference_key, int s,
                                          const Commitment& commitment,
                                          std::int64_t n_keys,
                                          const AnalyzerConfig& config,
                                          RandomStream& rng,
                                          Execution exec = Execution::parallel);

struct BoundSweepRow {
  double mu = 0.0;
  int nu = 0;
  double bound = 0.0;  // majority_prob(p_in_max, nu) at this mu
};

// Theoretical cheating bound over a photon-number grid, per nu.
// Requires enhancement >= 16 (below that the separation is negative and the
// bound carries no information).
std::vector<BoundSweepRow> cheat_bound_sweep(std::span<const double> mu_grid,
                                             std::span<const int> nu_list,
                                             const SetupParams& params);

// Shared search step: best false target of `key` under a fixed mask/region,
// skipping mode `excluded`. Used by both search entry points.
CheatRecord best_false_response(const PukKey& key, const PhaseMask& mask,
                                int excluded, const AcceptRegion& region,
                                const AnalyzerConfig& config);

}  // namespace puk
