#include "puk/protocol.hpp"

#include <stdexcept>
#include <string>

#include "puk/serialize.hpp"

namespace puk {
namespace {

void check_dimensions(const PukKey& key, const AnalyzerConfig& config) {
  if (key.output_modes() != config.n || key.input_modes() != config.setup.input_modes)
    throw std::invalid_argument("protocol: key dimensions do not match config");
}

}  // namespace

void AnalyzerConfig::validate() const {
  setup.validate();
  if (n < 2) throw std::invalid_argument("config: bid alphabet size n must be >= 2");
  if (commit_probes < 1) throw std::invalid_argument("config: M must be >= 1");
  if (reveal_probes < 1 || reveal_probes % 2 == 0)
    throw std::invalid_argument("config: nu must be odd and >= 1");
  policy.validate();
}

Commitment commit(int secret, const PukKey& key, const AnalyzerConfig& config,
                  RandomStream& rng) {
  config.validate();
  if (secret < 0 || secret >= config.n)
    throw std::out_of_range("commit: secret " + std::to_string(secret) + " not in bid alphabet");
  check_dimensions(key, config);

  PhaseMask mask = optimize_mask(key, secret, config.policy);
  const QuadPoint true_mean =
      mean_quadratures(mean_field(key, mask, secret, config.setup.mu, config.setup.tau));
  const DhdModel dhd(config.setup.eta);
  const auto probes = sample_dhd(true_mean, dhd, config.commit_probes, rng);
  const MeanEstimate estimate = estimate_mean(probes, dhd);

  return Commitment{std::move(mask), estimate, key_fingerprint(key),
                    params_fingerprint(config)};
}

VerifyOutcome reveal_verify(const Commitment& commitment, int claimed,
                            const PukKey& key, const AnalyzerConfig& config,
                            RandomStream& rng) {
  config.validate();
  if (claimed < 0 || claimed >= config.n)
    throw std::out_of_range("reveal: claimed bid not in alphabet");
  if (commitment.params_fingerprint != params_fingerprint(config))
    throw std::invalid_argument("reveal: config does not match the committed parameters");
  if (commitment.mask.size() != config.setup.input_modes)
    throw std::invalid_argument("reveal: committed mask length inconsistent with config");
  if (commitment.estimate.probes != config.commit_probes)
    throw std::invalid_argument("reveal: commitment probe count does not match configured M");

  VerifyOutcome out;
  if (commitment.key_fingerprint != key_fingerprint(key)) {
    out.reason = RejectReason::fingerprint_mismatch;
    return out;
  }
  check_dimensions(key, config);

  const QuadPoint mean =
      mean_quadratures(mean_field(key, commitment.mask, claimed, config.setup.mu,
                                  config.setup.tau));
  const DhdModel dhd(config.setup.eta);
  const AcceptRegion region{commitment.estimate.center, config.setup.w};

  out.samples.reserve(static_cast<std::size_t>(config.reveal_probes));
  int hits = 0;
  for (int i = 0; i < config.reveal_probes; ++i) {
    const QuadPoint z = sample_dhd_one(mean, dhd, rng);
    out.samples.push_back(z);
    if (region.contains(z)) ++hits;
  }
  out.hits = hits;
  out.accepted = hits > config.reveal_probes / 2;
  out.reason = out.accepted ? RejectReason::none : RejectReason::majority_fail;
  return out;
}

double honest_accept_prob(const AnalyzerConfig& config) {
  config.validate();
  return majority_prob(p_in_opt(config.setup), config.reveal_probes);
}

}  // namespace puk
