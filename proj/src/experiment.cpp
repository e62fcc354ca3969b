#include "puk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include <json.hpp>

#include "puk/mc.hpp"
#include "puk/serialize.hpp"
#include "puk/sha256.hpp"
#include "puk/version.hpp"

namespace puk {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

std::string csv_bool(bool optimized) { return optimized ? "optimized" : "random"; }

struct Artifacts {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
  json manifest_outputs = json::array();

  void write(const std::string& name, const std::string& content) {
    const auto path = dir / name;
    try {
      write_text_file(path, content);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    files.push_back(path);
    manifest_outputs.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
  }
};

json spec_echo(const ExperimentSpec& spec) {
  json j{{"kind", kind_name(spec.kind)},
         {"seed", spec.seed},
         {"replicates", spec.replicates},
         {"execution", spec.execution == Execution::serial ? "serial" : "parallel"},
         {"config", config_to_json(spec.config)}};
  switch (spec.kind) {
    case ExperimentKind::response_map:
      j["mu_values"] = spec.mu_values;
      break;
    case ExperimentKind::honest_run:
      j["reveals_per_session"] = spec.reveals_per_session;
      break;
    case ExperimentKind::cheat_multi:
      j["search_keys"] = spec.search_keys;
      break;
    case ExperimentKind::bound_sweep:
      j["mu_values"] = spec.mu_values;
      j["nu_values"] = spec.nu_values;
      j["search_keys"] = spec.search_keys;
      break;
    case ExperimentKind::stats_check:
      j["stats_keys"] = spec.stats_keys;
      break;
    default:
      break;
  }
  return j;
}

void finish(Artifacts& art, const ExperimentSpec& spec, json emergent) {
  json manifest{{"format_version", 1},
                {"toolkit_version", std::string(kToolkitVersion)},
                {"spec", spec_echo(spec)},
                {"emergent", std::move(emergent)},
                {"outputs", art.manifest_outputs}};
  art.write("manifest.json", manifest.dump(2) + "\n");
}

std::string cheat_records_csv(std::span<const CheatRecord> records) {
  std::string csv = "key_id,s_prime,x,y,p_single,p_cheat\n";
  for (const auto& r : records) {
    csv += std::to_string(r.key_id) + ',' + std::to_string(r.false_target) + ',' +
           format_double(r.response.x) + ',' + format_double(r.response.y) + ',' +
           format_double(r.p_single) + ',' + format_double(r.p_cheat) + '\n';
  }
  return csv;
}

// One committed reference session: key, secret, commitment, emergent E.
struct ReferenceSession {
  PukKey key;
  int secret;
  Commitment commitment;
  double emergent;
};

ReferenceSession make_reference(const AnalyzerConfig& cfg, std::uint64_t seed) {
  RandomStream rng(seed);
  PukKey key = PukKey::random(cfg.n, cfg.setup.input_modes, cfg.setup.ell_over_L, rng);
  const int secret = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.n)));
  Commitment c = commit(secret, key, cfg, rng);
  const double emergent = enhancement(key, c.mask, secret, cfg.setup.mu, cfg.setup.tau);
  return {std::move(key), secret, std::move(c), emergent};
}

void run_response_map(const ExperimentSpec& spec, Artifacts& art) {
  mc::ResponseMapJob job;
  job.seed = spec.seed;
  job.n_keys = spec.replicates;
  job.output_modes = spec.config.n;
  job.input_modes = spec.config.setup.input_modes;
  job.ell_over_L = spec.config.setup.ell_over_L;
  job.tau = spec.config.setup.tau;
  job.s = 0;
  job.mu_values = spec.mu_values.empty() ? std::vector<double>{spec.config.setup.mu}
                                         : spec.mu_values;
  job.policy = spec.config.policy;
  const auto rows = mc::response_map(job, spec.execution);

  std::string csv = "key_id,mu,kind,x,y\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.key_id) + ',' + format_double(r.mu) + ',' +
           csv_bool(r.optimized) + ',' + format_double(r.z.x) + ',' +
           format_double(r.z.y) + '\n';
  }
  art.write("response_map.csv", csv);

  // Mean emergent enhancement over the optimized rows (mu-independent).
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& r : rows) {
    if (!r.optimized) continue;
    const double v = spec.config.setup.tau / spec.config.setup.input_modes *
                     (1.0 - spec.config.setup.ell_over_L);
    sum += (r.z.x * r.z.x + r.z.y * r.z.y) / (2.0 * r.mu * v);
    ++count;
  }
  finish(art, spec,
         json{{"mean_enhancement", count > 0 ? sum / static_cast<double>(count) : 0.0}});
}

void run_honest(const ExperimentSpec& spec, Artifacts& art) {
  mc::HonestRunJob job;
  job.seed = spec.seed;
  job.sessions = spec.replicates;
  job.reveals_per_session = spec.reveals_per_session;
  job.config = spec.config;
  const auto stats = mc::honest_run(job, spec.execution);

  std::string csv = "session,secret,trials,accepts\n";
  for (const auto& s : stats.sessions) {
    csv += std::to_string(s.session) + ',' + std::to_string(s.secret) + ',' +
           std::to_string(s.trials) + ',' + std::to_string(s.accepts) + '\n';
  }
  art.write("honest_run.csv", csv);

  finish(art, spec,
         json{{"trials", stats.trials},
              {"accepts", stats.accepts},
              {"empirical_accept_rate",
               static_cast<double>(stats.accepts) / static_cast<double>(stats.trials)},
              {"analytic_accept_prob", honest_accept_prob(spec.config)},
              {"estimates_within_4sd", stats.estimates_within_4sd}});
}

void run_cheat_single(const ExperimentSpec& spec, Artifacts& art) {
  mc::CheatSingleJob job;
  job.seed = spec.seed;
  job.replicates = spec.replicates;
  job.config = &spec.config;
  const auto results = mc::cheat_single(job, spec.execution);

  std::vector<CheatRecord> records;
  records.reserve(results.size());
  double mean_e = 0.0, max_single = 0.0;
  for (const auto& r : results) {
    records.push_back(r.record);
    mean_e += r.emergent_enhancement;
    max_single = std::max(max_single, r.record.p_single);
  }
  mean_e /= static_cast<double>(results.size());
  art.write("cheat_single.csv", cheat_records_csv(records));

  finish(art, spec,
         json{{"mean_enhancement", mean_e}, {"max_p_single", max_single}});
}

void run_cheat_multi(const ExperimentSpec& spec, Artifacts& art) {
  const auto& cfg = spec.config;
  const ReferenceSession ref = make_reference(cfg, derive_seed(spec.seed, 0));
  const CheatRecord single = best_false_target(ref.key, ref.secret, ref.commitment, cfg);

  RandomStream search_rng(derive_seed(spec.seed, 1));
  const auto records = multi_puk_search(ref.key, ref.secret, ref.commitment,
                                        spec.search_keys, cfg, search_rng, spec.execution);

  std::vector<CheatRecord> all;
  all.reserve(records.size() + 1);
  all.push_back(single);
  all.insert(all.end(), records.begin(), records.end());
  art.write("cheat_multi.csv", cheat_records_csv(all));

  double max_multi = 0.0;
  for (const auto& r : records) max_multi = std::max(max_multi, r.p_single);
  SetupParams bound_params = cfg.setup;
  bound_params.enhancement = ref.emergent;
  finish(art, spec,
         json{{"reference_secret", ref.secret},
              {"reference_estimate",
               {{"x", ref.commitment.estimate.center.x},
                {"y", ref.commitment.estimate.center.y}}},
              {"emergent_enhancement", ref.emergent},
              {"single_key_max_p_single", single.p_single},
              {"multi_key_max_p_single", max_multi},
              {"p_in_max_at_emergent", p_in_max(bound_params)}});
}

void run_bound_sweep(const ExperimentSpec& spec, Artifacts& art) {
  const std::vector<double> mus = spec.mu_values.empty()
                                      ? std::vector<double>{1000.0, 1500.0, 2000.0, 2650.0}
                                      : spec.mu_values;
  const std::vector<int> nus =
      spec.nu_values.empty() ? std::vector<int>{1, 3, 5} : spec.nu_values;

  std::string csv = "mu,nu,bound,empirical_max,enhancement\n";
  json cells = json::array();
  for (std::size_t i = 0; i < mus.size(); ++i) {
    AnalyzerConfig cfg = spec.config;
    cfg.setup.mu = mus[i];
    const std::uint64_t cell_seed = derive_seed(spec.seed, i);

    const ReferenceSession ref = make_reference(cfg, derive_seed(cell_seed, 0));
    const CheatRecord single = best_false_target(ref.key, ref.secret, ref.commitment, cfg);
    RandomStream search_rng(derive_seed(cell_seed, 1));
    const auto records = multi_puk_search(ref.key, ref.secret, ref.commitment,
                                          spec.search_keys, cfg, search_rng, spec.execution);
    double max_single = single.p_single;
    for (const auto& r : records) max_single = std::max(max_single, r.p_single);

    SetupParams bound_params = cfg.setup;
    bound_params.enhancement = ref.emergent;
    const double pmax = p_in_max(bound_params);
    for (int nu : nus) {
      csv += format_double(mus[i]) + ',' + std::to_string(nu) + ',' +
             format_double(majority_prob(pmax, nu)) + ',' +
             format_double(majority_prob(max_single, nu)) + ',' +
             format_double(ref.emergent) + '\n';
    }
    cells.push_back({{"mu", mus[i]},
                     {"emergent_enhancement", ref.emergent},
                     {"max_p_single", max_single},
                     {"p_in_max", pmax}});
  }
  art.write("bound_sweep.csv", csv);
  finish(art, spec, json{{"cells", cells}});
}

void run_stats_check(const ExperimentSpec& spec, Artifacts& art) {
  const auto& setup = spec.config.setup;
  const double v = setup.tau / setup.input_modes * (1.0 - setup.ell_over_L);

  mc::SpeckleStatsJob sjob;
  sjob.seed = derive_seed(spec.seed, 0);
  sjob.n_keys = spec.stats_keys;
  sjob.output_modes = 2;
  sjob.input_modes = setup.input_modes;
  sjob.ell_over_L = setup.ell_over_L;
  sjob.mu = setup.mu;
  sjob.tau = setup.tau;
  sjob.s = 0;
  const auto speckle = mc::speckle_stats(sjob, spec.execution);

  mc::EntryMomentJob ejob;
  ejob.seed = derive_seed(spec.seed, 1);
  ejob.n_keys = 10;
  ejob.output_modes = spec.config.n;
  ejob.input_modes = setup.input_modes;
  ejob.ell_over_L = setup.ell_over_L;
  const auto entry = mc::entry_moment(ejob, spec.execution);

  mc::EnhancementJob ojob;
  ojob.seed = derive_seed(spec.seed, 2);
  ojob.n_keys = std::min<std::int64_t>(spec.stats_keys, 200);
  ojob.output_modes = 2;
  ojob.input_modes = setup.input_modes;
  ojob.ell_over_L = setup.ell_over_L;
  ojob.mu = setup.mu;
  ojob.tau = setup.tau;
  ojob.s = 0;
  ojob.policy = spec.config.policy;
  const auto opt = mc::enhancement_stats(ojob, spec.execution);

  mc::EnhancementJob rjob = ojob;
  rjob.seed = derive_seed(spec.seed, 3);
  rjob.n_keys = spec.stats_keys;
  rjob.random_mask = true;
  const auto rnd = mc::enhancement_stats(rjob, spec.execution);

  std::string csv = "metric,value,expected\n";
  auto row = [&](const std::string& name, double value, double expected) {
    csv += name + ',' + format_double(value) + ',' + format_double(expected) + '\n';
  };
  row("mean_x", speckle.mean_x, 0.0);
  row("mean_y", speckle.mean_y, 0.0);
  row("var_z", speckle.var_z, 2.0 * setup.mu * v);
  row("within_rho", speckle.within_rho, 1.0 - std::exp(-8.0));
  row("entry_mean_sq", entry.mean_sq_magnitude,
      (1.0 - setup.ell_over_L) / setup.input_modes);
  row("enhancement_optimized", opt.mean, 1.0 + kPi / 4.0 * (setup.input_modes - 1));
  row("enhancement_random", rnd.mean, 1.0);
  art.write("stats_check.csv", csv);

  finish(art, spec,
         json{{"keys", spec.stats_keys}, {"mean_enhancement", opt.mean}});
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::response_map: return "response-map";
    case ExperimentKind::honest_run: return "honest-run";
    case ExperimentKind::cheat_single: return "cheat-single";
    case ExperimentKind::cheat_multi: return "cheat-multi";
    case ExperimentKind::bound_sweep: return "bound-sweep";
    case ExperimentKind::stats_check: return "stats-check";
  }
  throw std::invalid_argument("unknown experiment kind");
}

RunOutput run(const ExperimentSpec& spec) {
  spec.config.validate();
  if (spec.replicates < 1) throw std::invalid_argument("run: replicates must be >= 1");

  std::error_code ec;
  std::filesystem::create_directories(spec.output_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + spec.output_dir.string());

  Artifacts art;
  art.dir = spec.output_dir;
  switch (spec.kind) {
    case ExperimentKind::response_map: run_response_map(spec, art); break;
    case ExperimentKind::honest_run: run_honest(spec, art); break;
    case ExperimentKind::cheat_single: run_cheat_single(spec, art); break;
    case ExperimentKind::cheat_multi: run_cheat_multi(spec, art); break;
    case ExperimentKind::bound_sweep: run_bound_sweep(spec, art); break;
    case ExperimentKind::stats_check: run_stats_check(spec, art); break;
  }
  return RunOutput{std::move(art.files)};
}

ValidationReport validate_config(const AnalyzerConfig& config) {
  ValidationReport report;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) report.violations.push_back(message);
  };
  const auto& s = config.setup;
  check(s.input_modes >= 1, "N must be >= 1");
  check(s.mu > 0.0, "mu must be positive");
  check(s.tau > 0.0 && s.tau <= 1.0, "tau must lie in (0, 1]");
  check(s.ell_over_L > 0.0 && s.ell_over_L < 1.0, "ell_over_L must lie in (0, 1)");
  check(s.eta >= 0.5 && s.eta < 1.0, "eta must lie in [0.5, 1)");
  check(s.w > 0.0, "w must be positive");
  check(s.enhancement >= 1.0, "enhancement must be >= 1");
  check(config.n >= 2, "bid alphabet size n must be >= 2");
  check(config.commit_probes >= 1, "M must be >= 1");
  check(config.reveal_probes >= 1 && config.reveal_probes % 2 == 1,
        "nu must be odd and >= 1");
  check(config.policy.phase_levels == 0 || config.policy.phase_levels >= 2,
        "phase_levels must be 0 or >= 2");
  check(config.policy.iterations >= 1, "iterations must be >= 1");

  if (!report.ok()) return report;

  const double v = s.speckle_v();
  report.derived.emplace_back("V", format_double(v));
  report.derived.emplace_back("w_tilde", format_double(s.w_tilde()));
  report.derived.emplace_back("rho", format_double(rho(s)));
  report.derived.emplace_back("rho_opt", format_double(rho_opt(s)));
  report.derived.emplace_back("delta", format_double(delta_separation(s)));
  if (s.enhancement > 16.0) {
    report.derived.emplace_back("critical_mu_at_omega_8",
                                format_double(critical_mu(8.0, s)));
  } else {
    report.derived.emplace_back("critical_mu_at_omega_8", "unreachable");
  }
  report.derived.emplace_back("p_in_opt", format_double(p_in_opt(s)));
  report.derived.emplace_back("honest_accept_prob",
                              format_double(honest_accept_prob(config)));

  if (s.enhancement == 16.0)
    report.warnings.push_back("enhancement = 16: zero separation, delta = 0");
  else if (s.enhancement < 16.0)
    report.warnings.push_back("enhancement < 16: negative separation, no binding margin");
  if (s.w_tilde() < 7.0)
    report.warnings.push_back("w_tilde < 7: honest acceptance probability drops below ~1");
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::string out;
  out += report.ok() ? "config: ok\n" : "config: INVALID\n";
  for (const auto& v : report.violations) out += "violation: " + v + '\n';
  for (const auto& w : report.warnings) out += "warning: " + w + '\n';
  for (const auto& [name, value] : report.derived) out += name + " = " + value + '\n';
  return out;
}

}  // namespace puk
