#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "puk/detection.hpp"
#include "puk/protocol.hpp"
#include "puk/speckle.hpp"

namespace puk {

inline constexpr int kKeyFormatVersion = 1;
inline constexpr int kMaskFormatVersion = 1;
inline constexpr int kCommitmentFormatVersion = 1;

// Content hash over dimensions and raw entry bytes (little-endian IEEE 754).
std::string key_fingerprint(const PukKey& key);

// Hash of the canonical JSON form of the public config.
std::string params_fingerprint(const AnalyzerConfig& config);

// Key file: header {n, N, ell_over_L, seed} plus row-major [re, im] pairs.
nlohmann::json key_to_json(const PukKey& key, std::uint64_t seed);
PukKey key_from_json(const nlohmann::json& j);

// Standalone mask file: phases plus {method, phase_levels, s, key_fingerprint}.
nlohmann::json mask_to_json(const PhaseMask& mask, const OptimizationPolicy& policy,
                            int s, const std::string& key_fp);
PhaseMask mask_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const MeanEstimate& estimate, double eta);

nlohmann::json commitment_to_json(const Commitment& c);
Commitment commitment_from_json(const nlohmann::json& j, double eta);

nlohmann::json config_to_json(const AnalyzerConfig& config);
AnalyzerConfig config_from_json(const nlohmann::json& j);

// CSV sample dump with header "trial,x,y".
std::string samples_to_csv(std::span<const QuadPoint> samples);

// Round-trip-exact decimal rendering (shortest form) for CSV output.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace puk
