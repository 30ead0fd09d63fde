#pragma once

#include "ddsp/harness.hpp"

#include <filesystem>
#include <string>

namespace ddsp {

inline constexpr const char* kArtifactVersion = "ddsp 0.1.0";

// JSON experiment description; omitted fields fall back to the built-in
// defaults (see README for the schema). Unknown keys and invariant
// violations throw with a message naming the offending key.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

// Canonical desk-scale experiment for each of the headline result curves.
// Names: papr, pdr-sweep, snr-sweep, speed-sweep.
ExperimentConfig preset(const std::string& name);

std::string csv_text(const std::vector<MetricsRecord>& records);

// Atomic write (temp file + rename); also writes <path>.manifest.json with
// the config echo, artifact version and timestamp.
void emit_csv(const std::vector<MetricsRecord>& records, const std::filesystem::path& path);
void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& csv_path);

}  // namespace ddsp
