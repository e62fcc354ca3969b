#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puk/analysis.hpp"
#include "puk/detection.hpp"
#include "puk/rng.hpp"
#include "puk/speckle.hpp"
#include "puk/wavefront.hpp"

namespace puk {

// All public parameters of a protocol session. n is the size of the bid
// alphabet {0, ..., n-1}; M the commit-phase probe count; nu the odd
// reveal-phase probe count.
struct AnalyzerConfig {
  SetupParams setup;
  int n = 0;
  std::int64_t commit_probes = 1;  // M
  int reveal_probes = 1;           // nu, odd
  OptimizationPolicy policy;

  void validate() const;
};

// Bob's commitment: the optimized mask and the estimated mean response.
// Deliberately carries no encoding of the committed target mode; the
// fingerprints let the reveal phase detect key substitution or parameter
// drift.
struct Commitment {
  PhaseMask mask;
  MeanEstimate estimate;
  std::string key_fingerprint;
  std::string params_fingerprint;
};

enum class RejectReason { none, majority_fail, fingerprint_mismatch };

struct VerifyOutcome {
  bool accepted = false;
  int hits = 0;
  std::vector<QuadPoint> samples;
  RejectReason reason = RejectReason::none;
};

// Commit phase: optimize the mask for (key, secret), interrogate with M
// probes, and estimate the mean response.
Commitment commit(int secret, const PukKey& key, const AnalyzerConfig& config,
                  RandomStream& rng);

// Reveal phase: set the committed mask and the claimed target, draw exactly
// nu DHD outcomes and accept iff a strict majority lands in the acceptance
// square centered on the committed estimate. A key whose fingerprint does
// not match the commitment is rejected outright; a config that does not
// match the committed parameters is a caller error.
VerifyOutcome reveal_verify(const Commitment& commitment, int claimed,
                            const PukKey& key, const AnalyzerConfig& config,
                            RandomStream& rng);

// Analytic acceptance probability for an honest reveal:
// majority_prob(p_in_opt, nu).
double honest_accept_prob(const AnalyzerConfig& config);

}  // namespace puk
