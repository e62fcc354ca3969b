#pragma once

// Per-item logic shared by the serial and OpenMP kernel backends. Each item
// is a pure function of (job, item index); all randomness comes from the
// item's derived substream.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "puk/mc.hpp"
#include "puk/serialize.hpp"

namespace puk::mc::detail {

struct SpeckleItem {
  double x = 0.0;
  double y = 0.0;
  bool within_rho = false;
};

inline SpeckleItem speckle_item(const SpeckleStatsJob& job, const PhaseMask* fixed_mask,
                                std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const PukKey key = PukKey::random(job.output_modes, job.input_modes, job.ell_over_L, rng);
  PhaseMask local;
  const PhaseMask* mask = fixed_mask;
  if (job.mask_per_key) {
    local = PhaseMask::random(job.input_modes, rng);
    mask = &local;
  }
  const QuadPoint z = mean_quadratures(mean_field(key, *mask, job.s, job.mu, job.tau));
  const double v = job.tau / job.input_modes * (1.0 - job.ell_over_L);
  const double r = 4.0 * std::sqrt(job.mu * v);
  return {z.x, z.y, z.x * z.x + z.y * z.y <= r * r};
}

inline PhaseMask speckle_fixed_mask(const SpeckleStatsJob& job) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(job.n_keys)));
  return PhaseMask::random(job.input_modes, rng);
}

inline SpeckleStats speckle_reduce(const std::vector<SpeckleItem>& items) {
  SpeckleStats out;
  out.n_keys = static_cast<std::int64_t>(items.size());
  double sx = 0.0, sy = 0.0, szz = 0.0;
  std::int64_t within = 0;
  for (const auto& it : items) {
    sx += it.x;
    sy += it.y;
    szz += it.x * it.x + it.y * it.y;
    within += it.within_rho ? 1 : 0;
  }
  const double n = static_cast<double>(items.size());
  out.mean_x = sx / n;
  out.mean_y = sy / n;
  out.var_z = szz / n;
  out.within_rho = static_cast<double>(within) / n;
  double vx = 0.0, vy = 0.0;
  for (const auto& it : items) {
    vx += (it.x - out.mean_x) * (it.x - out.mean_x);
    vy += (it.y - out.mean_y) * (it.y - out.mean_y);
  }
  if (items.size() > 1) {
    out.se_x = std::sqrt(vx / (n - 1.0) / n);
    out.se_y = std::sqrt(vy / (n - 1.0) / n);
  }
  return out;
}

inline double entry_moment_item(const EntryMomentJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const PukKey key = PukKey::random(job.output_modes, job.input_modes, job.ell_over_L, rng);
  double sum = 0.0;
  for (const auto& r : key.entries()) sum += std::norm(r);
  return sum;
}

inline double enhancement_item(const EnhancementJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const PukKey key = PukKey::random(job.output_modes, job.input_modes, job.ell_over_L, rng);
  PhaseMask mask;
  if (job.random_mask) {
    mask = PhaseMask::random(job.input_modes, rng);
  } else {
    mask = optimize_mask(key, job.s, job.policy);
  }
  const int at = (job.evaluate_at >= 0) ? job.evaluate_at : job.s;
  return enhancement(key, mask, at, job.mu, job.tau);
}

inline void response_item(const ResponseMapJob& job, std::int64_t k, ResponseRow* slot) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const PukKey key = PukKey::random(job.output_modes, job.input_modes, job.ell_over_L, rng);
  const PhaseMask optimized = optimize_mask(key, job.s, job.policy);
  const PhaseMask random = PhaseMask::random(job.input_modes, rng);
  std::size_t i = 0;
  for (double mu : job.mu_values) {
    slot[i++] = {k, mu, true,
                 mean_quadratures(mean_field(key, optimized, job.s, mu, job.tau))};
    slot[i++] = {k, mu, false,
                 mean_quadratures(mean_field(key, random, job.s, mu, job.tau))};
  }
}

inline HonestSession honest_item(const HonestRunJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const auto& cfg = job.config;
  const PukKey key =
      PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
  const int secret = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.n)));
  const Commitment c = commit(secret, key, cfg, rng);

  const QuadPoint true_mean = mean_quadratures(
      mean_field(key, c.mask, secret, cfg.setup.mu, cfg.setup.tau));
  const double bound = 4.0 * c.estimate.per_axis_sd;

  HonestSession session;
  session.session = k;
  session.secret = secret;
  session.estimate_within_4sd =
      std::fabs(c.estimate.center.x - true_mean.x) < bound &&
      std::fabs(c.estimate.center.y - true_mean.y) < bound;
  session.trials = job.reveals_per_session;
  for (std::int64_t i = 0; i < job.reveals_per_session; ++i) {
    const VerifyOutcome out = reveal_verify(c, secret, key, cfg, rng);
    if (out.accepted) ++session.accepts;
  }
  return session;
}

inline HonestRunStats honest_reduce(std::vector<HonestSession> sessions) {
  HonestRunStats out;
  for (const auto& s : sessions) {
    out.trials += s.trials;
    out.accepts += s.accepts;
    out.estimates_within_4sd += s.estimate_within_4sd ? 1 : 0;
  }
  out.sessions = std::move(sessions);
  return out;
}

inline std::int64_t verify_chunk(const VerifyTrialsJob& job, std::int64_t chunk_index) {
  const std::int64_t begin = chunk_index * job.chunk;
  const std::int64_t end = std::min(begin + job.chunk, job.trials);
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(chunk_index)));
  const DhdModel dhd(job.eta);
  const int majority = job.nu / 2;
  std::int64_t accepts = 0;
  for (std::int64_t t = begin; t < end; ++t) {
    int hits = 0;
    for (int i = 0; i < job.nu; ++i) {
      if (job.region.contains(sample_dhd_one(job.mean, dhd, rng))) ++hits;
    }
    if (hits > majority) ++accepts;
  }
  return accepts;
}

inline CheatRecord multi_item(const MultiSearchJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const PukKey key = PukKey::random(job.output_modes, job.input_modes, job.ell_over_L, rng);
  CheatRecord rec =
      best_false_response(key, *job.mask, job.excluded_mode, job.region, *job.config);
  rec.key_id = k;
  return rec;
}

inline CheatSingleResult cheat_single_item(const CheatSingleJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const auto& cfg = *job.config;
  const PukKey key =
      PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
  const int secret = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.n)));
  const Commitment c = commit(secret, key, cfg, rng);

  CheatSingleResult out;
  out.key_id = k;
  out.secret = secret;
  out.emergent_enhancement =
      enhancement(key, c.mask, secret, cfg.setup.mu, cfg.setup.tau);
  out.committed_estimate = c.estimate.center;
  out.record = best_false_target(key, secret, c, cfg);
  out.record.key_id = k;
  return out;
}

inline ConcealSample conceal_item(const ConcealJob& job, std::int64_t k) {
  RandomStream rng(derive_seed(job.seed, static_cast<std::uint64_t>(k)));
  const auto& cfg = job.config;
  const PukKey key =
      PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
  const int secret = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.n)));
  const Commitment c = commit(secret, key, cfg, rng);

  double c1 = 0.0, s1 = 0.0, c2 = 0.0;
  for (double p : c.mask.phases()) {
    c1 += std::cos(p);
    s1 += std::sin(p);
    c2 += std::cos(2.0 * p);
  }
  const double n = static_cast<double>(c.mask.size());
  ConcealSample sample;
  sample.label = secret;
  sample.features[0] = c.estimate.center.x;
  sample.features[1] = c.estimate.center.y;
  sample.features[2] = c.estimate.center.x * c.estimate.center.x +
                       c.estimate.center.y * c.estimate.center.y;
  sample.features[3] = c1 / n;
  sample.features[4] = s1 / n;
  sample.features[5] = c2 / n;
  return sample;
}

inline std::int64_t n_chunks(std::int64_t total, std::int64_t chunk) {
  if (total < 1) throw std::invalid_argument("mc: trial count must be >= 1");
  if (chunk < 1) throw std::invalid_argument("mc: chunk size must be >= 1");
  return (total + chunk - 1) / chunk;
}

void validate_multi_job(const MultiSearchJob& job);

}  // namespace puk::mc::detail
