#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "puk/exec.hpp"
#include "puk/protocol.hpp"

namespace puk {

enum class ExperimentKind {
  response_map,
  honest_run,
  cheat_single,
  cheat_multi,
  bound_sweep,
  stats_check,
};

std::string kind_name(ExperimentKind kind);

// A fully specified, reproducible experiment. Running the same spec twice
// produces byte-identical artifacts.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::stats_check;
  AnalyzerConfig config;
  std::uint64_t seed = 1;
  std::int64_t replicates = 1;
  std::filesystem::path output_dir = ".";
  Execution execution = Execution::parallel;

  // Kind-specific knobs; unused fields are ignored by other kinds.
  std::vector<double> mu_values;            // response-map / bound-sweep grid
  std::vector<int> nu_values;               // bound-sweep
  std::int64_t search_keys = 500;           // cheat-multi / bound-sweep
  std::int64_t reveals_per_session = 1000;  // honest-run
  std::int64_t stats_keys = 10000;          // stats-check ensemble size
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOutput {
  std::vector<std::filesystem::path> files;  // written artifacts, manifest last
};

// Executes the experiment and writes its CSV table(s) plus a manifest
// (spec echo, seed, emergent enhancement, toolkit version, output hashes).
RunOutput run(const ExperimentSpec& spec);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, std::string>> derived;

  bool ok() const { return violations.empty(); }
};

// Checks every config invariant and reports derived quantities
// (V, w_tilde, rho, rho_o, delta, critical mu at omega = 8). No side effects.
ValidationReport validate_config(const AnalyzerConfig& config);

std::string format_report(const ValidationReport& report);

}  // namespace puk
