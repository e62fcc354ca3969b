// OpenMP backends. Work items land in preallocated slots and are reduced
// serially in index order, so the output matches the serial reference
// bit-for-bit at any thread count.

#include "mc_items.hpp"

namespace puk::mc::openmp {

SpeckleStats speckle_stats(const SpeckleStatsJob& job) {
  const PhaseMask fixed = job.mask_per_key ? PhaseMask() : detail::speckle_fixed_mask(job);
  std::vector<detail::SpeckleItem> items(static_cast<std::size_t>(job.n_keys));
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < job.n_keys; ++k)
    items[static_cast<std::size_t>(k)] = detail::speckle_item(job, &fixed, k);
  return detail::speckle_reduce(items);
}

EntryMoment entry_moment(const EntryMomentJob& job) {
  std::vector<double> sums(static_cast<std::size_t>(job.n_keys));
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < job.n_keys; ++k)
    sums[static_cast<std::size_t>(k)] = detail::entry_moment_item(job, k);
  EntryMoment out;
  out.entries = job.n_keys * static_cast<std::int64_t>(job.output_modes) * job.input_modes;
  double total = 0.0;
  for (double s : sums) total += s;
  out.mean_sq_magnitude = total / static_cast<double>(out.entries);
  return out;
}

EnhancementStats enhancement_stats(const EnhancementJob& job) {
  EnhancementStats out;
  out.values.resize(static_cast<std::size_t>(job.n_keys));
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < job.n_keys; ++k)
    out.values[static_cast<std::size_t>(k)] = detail::enhancement_item(job, k);
  double total = 0.0;
  for (double v : out.values) total += v;
  out.mean = total / static_cast<double>(job.n_keys);
  return out;
}

std::vector<ResponseRow> response_map(const ResponseMapJob& job) {
  const std::size_t per_key = 2 * job.mu_values.size();
  std::vector<ResponseRow> rows(static_cast<std::size_t>(job.n_keys) * per_key);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < job.n_keys; ++k)
    detail::response_item(job, k, rows.data() + static_cast<std::size_t>(k) * per_key);
  return rows;
}

HonestRunStats honest_run(const HonestRunJob& job) {
  std::vector<HonestSession> sessions(static_cast<std::size_t>(job.sessions));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < job.sessions; ++k)
    sessions[static_cast<std::size_t>(k)] = detail::honest_item(job, k);
  return detail::honest_reduce(std::move(sessions));
}

std::int64_t verify_trials(const VerifyTrialsJob& job) {
  const std::int64_t chunks = detail::n_chunks(job.trials, job.chunk);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c)
    counts[static_cast<std::size_t>(c)] = detail::verify_chunk(job, c);
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  return total;
}

std::vector<CheatRecord> multi_search(const MultiSearchJob& job) {
  detail::validate_multi_job(job);
  std::vector<CheatRecord> records(static_cast<std::size_t>(job.n_keys));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < job.n_keys; ++k)
    records[static_cast<std::size_t>(k)] = detail::multi_item(job, k);
  return records;
}

std::vector<CheatSingleResult> cheat_single(const CheatSingleJob& job) {
  if (job.config == nullptr) throw std::invalid_argument("cheat single: job is missing config");
  std::vector<CheatSingleResult> results(static_cast<std::size_t>(job.replicates));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < job.replicates; ++k)
    results[static_cast<std::size_t>(k)] = detail::cheat_single_item(job, k);
  return results;
}

std::vector<ConcealSample> conceal_dataset(const ConcealJob& job) {
  std::vector<ConcealSample> samples(static_cast<std::size_t>(job.n_commitments));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < job.n_commitments; ++k)
    samples[static_cast<std::size_t>(k)] = detail::conceal_item(job, k);
  return samples;
}

}  // namespace puk::mc::openmp
