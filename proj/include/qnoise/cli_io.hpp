#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnoise/scenarios.hpp"

namespace qnoise {

// Flat `key = value` format, '#' comments. Keys with a unit suffix
// (_khz cyclic kHz, _phz 1e15 rad/s, _um, _fg, _e) are converted to SI.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

// All accepted base keys, for diagnostics and documentation.
std::vector<std::string> known_config_keys();

std::string config_hash(const ScenarioConfig& cfg);

// Writes trace/sweep/mc CSVs, the manifest and a timing sidecar; returns the
// written paths. Everything except the sidecar is byte-reproducible.
std::vector<std::string> emit_outputs(RunSummary summary, const ScenarioConfig& cfg, const std::string& out_dir);

// Shortest-round-trip-safe formatting used in every CSV cell.
std::string format_number(double v);

}  // namespace qnoise
