#pragma once

#include <cstdint>
#include <vector>

#include "puk/adversary.hpp"
#include "puk/exec.hpp"
#include "puk/protocol.hpp"

// Deterministic Monte Carlo kernels.
//
// Every kernel maps a set of independent work items (keys, sessions, sample
// chunks) over counter-derived substreams: item k draws from
// RandomStream(derive_seed(job.seed, k)). Results are written to per-item
// slots and reduced serially in index order, so a kernel's output is a pure
// function of its job — independent of backend and thread count. The
// `serial` namespace holds the reference implementations; `openmp` the
// parallel ones. Both must agree bit-for-bit (tests/test_parallel.cpp).

namespace puk::mc {

// --- speckle ensemble statistics -----------------------------------------

struct SpeckleStatsJob {
  std::uint64_t seed = 1;
  std::int64_t n_keys = 1;
  int output_modes = 2;  // rows per generated key
  int input_modes = 1;   // N
  double ell_over_L = 0.2;
  double mu = 1.0;
  double tau = 1.0;
  int s = 0;                       // observed target mode
  bool mask_per_key = true;        // fresh random mask per key, else one fixed
                                   // mask drawn from substream n_keys
};

struct SpeckleStats {
  std::int64_t n_keys = 0;
  double mean_x = 0.0, mean_y = 0.0;    // ensemble mean of <Z_s>
  double se_x = 0.0, se_y = 0.0;        // standard errors of the means
  double var_z = 0.0;                   // mean of X^2 + Y^2
  double within_rho = 0.0;              // fraction with |Z| <= 4 sqrt(mu V)
};

// --- per-entry moment ------------------------------------------------------

struct EntryMomentJob {
  std::uint64_t seed = 1;
  std::int64_t n_keys = 1;
  int output_modes = 2;
  int input_modes = 1;
  double ell_over_L = 0.2;
};

struct EntryMoment {
  std::int64_t entries = 0;
  double mean_sq_magnitude = 0.0;  // mean |r|^2 over all entries
};

// --- enhancement ensemble ---------------------------------------------------

struct EnhancementJob {
  std::uint64_t seed = 1;
  std::int64_t n_keys = 1;
  int output_modes = 2;
  int input_modes = 1;
  double ell_over_L = 0.2;
  double mu = 1.0;
  double tau = 1.0;
  int s = 0;
  int evaluate_at = -1;  // if >= 0, measure at this mode instead of s
  OptimizationPolicy policy;
  bool random_mask = false;  // measure a random mask instead of optimizing
};

struct EnhancementStats {
  std::vector<double> values;  // per-key enhancement, by key index
  double mean = 0.0;
};

// --- response map (optimized vs random-mask responses) ---------------------

struct ResponseMapJob {
  std::uint64_t seed = 1;
  std::int64_t n_keys = 1;
  int output_modes = 2;
  int input_modes = 1;
  double ell_over_L = 0.2;
  double tau = 1.0;
  int s = 0;
  std::vector<double> mu_values;
  OptimizationPolicy policy;
};

struct ResponseRow {
  std::int64_t key_id = 0;
  double mu = 0.0;
  bool optimized = false;
  QuadPoint z;
};

// --- honest protocol sessions ----------------------------------------------

struct HonestRunJob {
  std::uint64_t seed = 1;
  std::int64_t sessions = 1;
  std::int64_t reveals_per_session = 1;
  AnalyzerConfig config;
};

struct HonestSession {
  std::int64_t session = 0;
  int secret = 0;
  std::int64_t trials = 0;
  std::int64_t accepts = 0;
  bool estimate_within_4sd = false;  // per-axis |estimate - true mean| < 4 sd
};

struct HonestRunStats {
  std::vector<HonestSession> sessions;
  std::int64_t trials = 0;
  std::int64_t accepts = 0;
  std::int64_t estimates_within_4sd = 0;
};

// --- DHD verification trials -------------------------------------------------

// Counts majority-accept outcomes for trials of nu samples drawn around
// `mean` against the fixed region. nu = 1 degenerates to plain in-region
// hit counting (used for the acceptance-probability Monte Carlo checks).
struct VerifyTrialsJob {
  std::uint64_t seed = 1;
  QuadPoint mean;
  AcceptRegion region;
  double eta = 0.6;
  int nu = 1;
  std::int64_t trials = 1;
  std::int64_t chunk = 1 << 14;
};

// --- multi-key cheating search ----------------------------------------------

struct MultiSearchJob {
  std::uint64_t seed = 1;
  std::int64_t n_keys = 1;
  int output_modes = 2;
  int input_modes = 1;
  double ell_over_L = 0.2;
  const PhaseMask* mask = nullptr;
  AcceptRegion region;
  int excluded_mode = 0;
  const AnalyzerConfig* config = nullptr;
};

// --- single-key cheating search over replicate sessions ---------------------

struct CheatSingleJob {
  std::uint64_t seed = 1;
  std::int64_t replicates = 1;
  const AnalyzerConfig* config = nullptr;
};

struct CheatSingleResult {
  std::int64_t key_id = 0;
  int secret = 0;
  double emergent_enhancement = 0.0;
  QuadPoint committed_estimate;
  CheatRecord record;
};

// --- commitment feature dataset (concealing analysis) -----------------------

struct ConcealJob {
  std::uint64_t seed = 1;
  std::int64_t n_commitments = 1;
  AnalyzerConfig config;
};

inline constexpr int kConcealFeatures = 6;

struct ConcealSample {
  int label = 0;  // committed target mode
  double features[kConcealFeatures] = {0, 0, 0, 0, 0, 0};
};

// --- kernel entry points ------------------------------------------------------

namespace serial {
SpeckleStats speckle_stats(const SpeckleStatsJob& job);
EntryMoment entry_moment(const EntryMomentJob& job);
EnhancementStats enhancement_stats(const EnhancementJob& job);
std::vector<ResponseRow> response_map(const ResponseMapJob& job);
HonestRunStats honest_run(const HonestRunJob& job);
std::int64_t verify_trials(const VerifyTrialsJob& job);
std::vector<CheatRecord> multi_search(const MultiSearchJob& job);
std::vector<CheatSingleResult> cheat_single(const CheatSingleJob& job);
std::vector<ConcealSample> conceal_dataset(const ConcealJob& job);
}  // namespace serial

namespace openmp {
SpeckleStats speckle_stats(const SpeckleStatsJob& job);
EntryMoment entry_moment(const EntryMomentJob& job);
EnhancementStats enhancement_stats(const EnhancementJob& job);
std::vector<ResponseRow> response_map(const ResponseMapJob& job);
HonestRunStats honest_run(const HonestRunJob& job);
std::int64_t verify_trials(const VerifyTrialsJob& job);
std::vector<CheatRecord> multi_search(const MultiSearchJob& job);
std::vector<CheatSingleResult> cheat_single(const CheatSingleJob& job);
std::vector<ConcealSample> conceal_dataset(const ConcealJob& job);
}  // namespace openmp

SpeckleStats speckle_stats(const SpeckleStatsJob& job, Execution exec);
EntryMoment entry_moment(const EntryMomentJob& job, Execution exec);
EnhancementStats enhancement_stats(const EnhancementJob& job, Execution exec);
std::vector<ResponseRow> response_map(const ResponseMapJob& job, Execution exec);
HonestRunStats honest_run(const HonestRunJob& job, Execution exec);
std::int64_t verify_trials(const VerifyTrialsJob& job, Execution exec);
std::vector<CheatRecord> multi_search(const MultiSearchJob& job, Execution exec);
std::vector<CheatSingleResult> cheat_single(const CheatSingleJob& job, Execution exec);
std::vector<ConcealSample> conceal_dataset(const ConcealJob& job, Execution exec);

}  // namespace puk::mc
