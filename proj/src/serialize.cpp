#include "puk/serialize.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "puk/sha256.hpp"

namespace puk {
namespace {

std::string method_name(OptimizeMethod m) {
  switch (m) {
    case OptimizeMethod::conjugate_exact:
      return "conjugate-exact";
    case OptimizeMethod::sequential_coordinate:
      return "sequential-coordinate";
  }
  throw std::invalid_argument("unknown optimization method");
}

OptimizeMethod method_from_name(const std::string& name) {
  if (name == "conjugate-exact") return OptimizeMethod::conjugate_exact;
  if (name == "sequential-coordinate") return OptimizeMethod::sequential_coordinate;
  throw std::invalid_argument("unknown optimization method: " + name);
}

}  // namespace

std::string key_fingerprint(const PukKey& key) { return key.fingerprint(); }

std::string params_fingerprint(const AnalyzerConfig& config) {
  return sha256_hex(config_to_json(config).dump());
}

nlohmann::json key_to_json(const PukKey& key, std::uint64_t seed) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : key.entries()) rows.push_back({r.real(), r.imag()});
  return {{"format_version", kKeyFormatVersion},
          {"n", key.output_modes()},
          {"N", key.input_modes()},
          {"ell_over_L", key.ell_over_L()},
          {"seed", seed},
          {"rows", std::move(rows)}};
}

PukKey key_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kKeyFormatVersion)
    throw std::invalid_argument("key file: unsupported format version");
  const int n = j.at("n").get<int>();
  const int m = j.at("N").get<int>();
  const double ell = j.at("ell_over_L").get<double>();
  std::vector<std::complex<double>> entries;
  const auto& rows = j.at("rows");
  entries.reserve(rows.size());
  for (const auto& pair : rows)
    entries.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return PukKey(n, m, ell, std::move(entries));
}

nlohmann::json mask_to_json(const PhaseMask& mask, const OptimizationPolicy& policy,
                            int s, const std::string& key_fp) {
  return {{"format_version", kMaskFormatVersion},
          {"method", method_name(policy.method)},
          {"phase_levels", policy.phase_levels},
          {"s", s},
          {"key_fingerprint", key_fp},
          {"phases", mask.phases()}};
}

PhaseMask mask_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kMaskFormatVersion)
    throw std::invalid_argument("mask file: unsupported format version");
  return PhaseMask(j.at("phases").get<std::vector<double>>());
}

nlohmann::json estimate_to_json(const MeanEstimate& estimate, double eta) {
  return {{"x", estimate.center.x},
          {"y", estimate.center.y},
          {"M", estimate.probes},
          {"per_axis_sd", estimate.per_axis_sd},
          {"eta", eta}};
}

nlohmann::json commitment_to_json(const Commitment& c) {
  return {{"format_version", kCommitmentFormatVersion},
          {"mask", c.mask.phases()},
          {"estimate",
           {{"x", c.estimate.center.x}, {"y", c.estimate.center.y}, {"M", c.estimate.probes}}},
          {"key_fp", c.key_fingerprint},
          {"params_fp", c.params_fingerprint}};
}

Commitment commitment_from_json(const nlohmann::json& j, double eta) {
  if (j.at("format_version").get<int>() != kCommitmentFormatVersion)
    throw std::invalid_argument("commitment file: unsupported format version");
  Commitment c;
  c.mask = PhaseMask(j.at("mask").get<std::vector<double>>());
  const auto& e = j.at("estimate");
  c.estimate.center = {e.at("x").get<double>(), e.at("y").get<double>()};
  c.estimate.probes = e.at("M").get<std::int64_t>();
  if (c.estimate.probes < 1)
    throw std::invalid_argument("commitment file: M must be >= 1");
  c.estimate.per_axis_sd =
      DhdModel(eta).per_axis_sd() / std::sqrt(static_cast<double>(c.estimate.probes));
  c.key_fingerprint = j.at("key_fp").get<std::string>();
  c.params_fingerprint = j.at("params_fp").get<std::string>();
  return c;
}

nlohmann::json config_to_json(const AnalyzerConfig& config) {
  return {{"setup",
           {{"N", config.setup.input_modes},
            {"mu", config.setup.mu},
            {"tau", config.setup.tau},
            {"ell_over_L", config.setup.ell_over_L},
            {"eta", config.setup.eta},
            {"w", config.setup.w},
            {"enhancement", config.setup.enhancement}}},
          {"n", config.n},
          {"M", config.commit_probes},
          {"nu", config.reveal_probes},
          {"policy",
           {{"method", method_name(config.policy.method)},
            {"phase_levels", config.policy.phase_levels},
            {"iterations", config.policy.iterations}}}};
}

AnalyzerConfig config_from_json(const nlohmann::json& j) {
  AnalyzerConfig cfg;
  const auto& s = j.at("setup");
  cfg.setup.input_modes = s.at("N").get<int>();
  cfg.setup.mu = s.at("mu").get<double>();
  cfg.setup.tau = s.at("tau").get<double>();
  cfg.setup.ell_over_L = s.at("ell_over_L").get<double>();
  cfg.setup.eta = s.at("eta").get<double>();
  cfg.setup.w = s.at("w").get<double>();
  cfg.setup.enhancement = s.at("enhancement").get<double>();
  cfg.n = j.at("n").get<int>();
  cfg.commit_probes = j.at("M").get<std::int64_t>();
  cfg.reveal_probes = j.at("nu").get<int>();
  const auto& p = j.at("policy");
  cfg.policy.method = method_from_name(p.at("method").get<std::string>());
  cfg.policy.phase_levels = p.at("phase_levels").get<int>();
  cfg.policy.iterations = p.at("iterations").get<int>();
  return cfg;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string samples_to_csv(std::span<const QuadPoint> samples) {
  std::string out = "trial,x,y\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(samples[i].x);
    out += ',';
    out += format_double(samples[i].y);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return content;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  return nlohmann::json::parse(read_text_file(path));
}

}  // namespace puk
