// Experiment configuration: JSON (de)serialization, aggregated validation,
// and a stable content hash stamped into every output artifact.
#pragma once

#include "tptweak/tptd.hpp"
#include "tptweak/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tptweak {

struct ExperimentConfig {
    std::string name = "reference";
    std::string output_dir = ".";
    PhysicalParams params{};
    CoherentState state{};
    SquareBarrier barrier{};
    PostSelection detection{};
    GridControls controls{};
    double delta_x = 0.5;                         // arrival-protocol separation
    std::vector<double> sweep_gammas{0.001, 0.00025};
};

// Parses and validates. Unknown keys and every constraint violation are
// collected into a single ConfigError message, one finding per line.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Loads a JSON file (IoError on unreadable path, ConfigError on bad content).
ExperimentConfig load_config(const std::string& path);

// Lossless round trip: config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const ExperimentConfig& c);

// Re-checks all invariants of an in-memory config (used by tests and by the
// harness after programmatic edits). Throws aggregated ConfigError.
void validate_config(const ExperimentConfig& c);

// FNV-1a 64-bit hash of the canonical (sorted-key) JSON dump, as 16 hex chars.
std::string config_hash(const ExperimentConfig& c);

}  // namespace tptweak
