// Command-line front end: reproducible, seeded experiments plus the
// file-based commit/reveal operations.
//
// Exit codes: 0 success, 2 usage error, 3 I/O failure, 4 invariant violation.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "puk/experiment.hpp"
#include "puk/mc.hpp"
#include "puk/serialize.hpp"
#include "puk/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;

puk::AnalyzerConfig default_config() {
  puk::AnalyzerConfig cfg;
  cfg.setup.input_modes = 625;
  cfg.setup.mu = 1500.0;
  cfg.setup.tau = 0.05;
  cfg.setup.ell_over_L = 0.2;
  cfg.setup.eta = 0.6;
  cfg.setup.w = 8.0 / std::sqrt(0.6);  // w_tilde = 8
  cfg.setup.enhancement = 491.0884539600077;  // 1 + (pi/4)(N - 1) at N = 625
  cfg.n = 625;
  cfg.commit_probes = 1000;
  cfg.reveal_probes = 3;
  return cfg;
}

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t replicates = 1;
  bool serial = false;

  puk::AnalyzerConfig load_config() const {
    if (config_path.empty()) return default_config();
    return puk::config_from_json(puk::read_json_file(config_path));
  }
  puk::Execution execution() const {
    return serial ? puk::Execution::serial : puk::Execution::parallel;
  }
};

void print_outputs(const puk::RunOutput& out) {
  for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
}

int run_experiment(puk::ExperimentSpec spec) {
  print_outputs(puk::run(spec));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis toolkit for an optical commitment scheme "
               "built on random scattering keys"};
  app.set_version_flag("--version", std::string(puk::kToolkitVersion));
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--seed", opts.seed, "master seed (64-bit)");
  app.add_option("--config", opts.config_path, "analyzer config JSON");
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--replicates", opts.replicates, "replicate count");
  app.add_flag("--serial", opts.serial, "use the serial reference kernels");

  // experiment subcommands
  auto* sc_response = app.add_subcommand("response-map",
                                         "optimized vs random-mask response tables");
  std::vector<double> mu_values;
  sc_response->add_option("--mu", mu_values, "photon numbers to tabulate");

  auto* sc_honest = app.add_subcommand("honest-run", "honest commit/reveal sessions");
  std::int64_t reveals = 1000;
  sc_honest->add_option("--reveals", reveals, "reveals per session");

  auto* sc_cheat1 = app.add_subcommand("cheat-single",
                                       "single-key false-target search per session");

  auto* sc_cheatn = app.add_subcommand("cheat-multi",
                                       "multi-key false-target search against one commitment");
  std::int64_t search_keys = 500;
  sc_cheatn->add_option("--keys", search_keys, "number of fresh keys to search");

  auto* sc_sweep = app.add_subcommand("bound-sweep",
                                      "cheating bound vs empirical maximum over a mu grid");
  std::vector<double> sweep_mu;
  std::vector<int> sweep_nu;
  std::int64_t sweep_keys = 500;
  sc_sweep->add_option("--mu", sweep_mu, "photon-number grid");
  sc_sweep->add_option("--nu", sweep_nu, "majority-vote sizes (odd)");
  sc_sweep->add_option("--keys", sweep_keys, "fresh keys per grid point");

  auto* sc_stats = app.add_subcommand("stats-check", "speckle/enhancement ensemble statistics");
  std::int64_t stats_keys = 10000;
  sc_stats->add_option("--keys", stats_keys, "ensemble size");

  auto* sc_validate = app.add_subcommand("validate", "check config invariants, print derived values");

  // protocol file operations
  auto* sc_gen = app.add_subcommand("gen-puk", "generate a random key file");
  std::string key_out = "key.json";
  sc_gen->add_option("--key-out", key_out, "key file name (relative to --out)");

  auto* sc_commit = app.add_subcommand("commit", "produce a commitment from a key and secret");
  std::string commit_key_path;
  int commit_secret = 0;
  std::string commitment_out = "commitment.json";
  sc_commit->add_option("--key", commit_key_path, "key file")->required();
  sc_commit->add_option("--secret", commit_secret, "committed target mode")->required();
  sc_commit->add_option("--commitment-out", commitment_out,
                        "commitment file name (relative to --out)");

  auto* sc_reveal = app.add_subcommand("reveal", "verify a claimed bid against a commitment");
  std::string reveal_key_path, reveal_commitment_path;
  int claimed = 0;
  std::string outcome_out = "outcome.json";
  sc_reveal->add_option("--key", reveal_key_path, "key file")->required();
  sc_reveal->add_option("--commitment", reveal_commitment_path, "commitment file")->required();
  sc_reveal->add_option("--claimed", claimed, "claimed target mode")->required();
  sc_reveal->add_option("--outcome-out", outcome_out, "outcome file name (relative to --out)");

  // allow the global flags to appear after the subcommand as well
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const puk::AnalyzerConfig config = opts.load_config();
    const std::filesystem::path out_dir(opts.out_dir);

    puk::ExperimentSpec spec;
    spec.config = config;
    spec.seed = opts.seed;
    spec.replicates = opts.replicates;
    spec.output_dir = out_dir;
    spec.execution = opts.execution();

    if (sc_response->parsed()) {
      spec.kind = puk::ExperimentKind::response_map;
      spec.mu_values = mu_values;
      return run_experiment(std::move(spec));
    }
    if (sc_honest->parsed()) {
      spec.kind = puk::ExperimentKind::honest_run;
      spec.reveals_per_session = reveals;
      return run_experiment(std::move(spec));
    }
    if (sc_cheat1->parsed()) {
      spec.kind = puk::ExperimentKind::cheat_single;
      return run_experiment(std::move(spec));
    }
    if (sc_cheatn->parsed()) {
      spec.kind = puk::ExperimentKind::cheat_multi;
      spec.search_keys = search_keys;
      return run_experiment(std::move(spec));
    }
    if (sc_sweep->parsed()) {
      spec.kind = puk::ExperimentKind::bound_sweep;
      spec.mu_values = sweep_mu;
      spec.nu_values = sweep_nu;
      spec.search_keys = sweep_keys;
      return run_experiment(std::move(spec));
    }
    if (sc_stats->parsed()) {
      spec.kind = puk::ExperimentKind::stats_check;
      spec.stats_keys = stats_keys;
      return run_experiment(std::move(spec));
    }
    if (sc_validate->parsed()) {
      const auto report = puk::validate_config(config);
      std::cout << puk::format_report(report);
      return report.ok() ? kExitOk : kExitInvariant;
    }

    if (sc_gen->parsed()) {
      config.validate();
      puk::RandomStream rng(opts.seed);
      const puk::PukKey key = puk::PukKey::random(config.n, config.setup.input_modes,
                                                  config.setup.ell_over_L, rng);
      std::filesystem::create_directories(out_dir);
      const auto path = out_dir / key_out;
      puk::write_text_file(path, puk::key_to_json(key, opts.seed).dump() + "\n");
      std::cout << "wrote " << path.string() << '\n';
      std::cout << "fingerprint " << puk::key_fingerprint(key) << '\n';
      return kExitOk;
    }
    if (sc_commit->parsed()) {
      const puk::PukKey key = puk::key_from_json(puk::read_json_file(commit_key_path));
      puk::RandomStream rng(opts.seed);
      const puk::Commitment c = puk::commit(commit_secret, key, config, rng);
      std::filesystem::create_directories(out_dir);
      const auto path = out_dir / commitment_out;
      puk::write_text_file(path, puk::commitment_to_json(c).dump() + "\n");
      std::cout << "wrote " << path.string() << '\n';
      return kExitOk;
    }
    if (sc_reveal->parsed()) {
      const puk::PukKey key = puk::key_from_json(puk::read_json_file(reveal_key_path));
      const puk::Commitment c = puk::commitment_from_json(
          puk::read_json_file(reveal_commitment_path), config.setup.eta);
      puk::RandomStream rng(opts.seed);
      const puk::VerifyOutcome out = puk::reveal_verify(c, claimed, key, config, rng);

      nlohmann::json samples = nlohmann::json::array();
      for (const auto& z : out.samples) samples.push_back({{"x", z.x}, {"y", z.y}});
      std::string reason = "none";
      if (out.reason == puk::RejectReason::majority_fail) reason = "majority-fail";
      if (out.reason == puk::RejectReason::fingerprint_mismatch) reason = "fingerprint-mismatch";
      nlohmann::json j{{"accepted", out.accepted},
                       {"hits", out.hits},
                       {"reason", reason},
                       {"claimed", claimed},
                       {"samples", samples}};
      std::filesystem::create_directories(out_dir);
      const auto path = out_dir / outcome_out;
      puk::write_text_file(path, j.dump(2) + "\n");
      std::cout << (out.accepted ? "ACCEPT" : "REJECT(" + reason + ")") << '\n';
      std::cout << "wrote " << path.string() << '\n';
      return kExitOk;
    }
  } catch (const puk::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::domain_error& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::out_of_range& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
