#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "rydberg/analysis.hpp"
#include "rydberg/experiment.hpp"
#include "rydberg/protocol.hpp"

// JSON documents with explicit units in every field name. Keys starting
// with '_' are free-form comments; any other unknown key is rejected.

namespace rydberg {

using json = nlohmann::json;

/// An experiment document. "mode" may list several modes; each one is run
/// with otherwise identical settings.
struct ExperimentFile {
    ExperimentConfig config;
    std::vector<Mode> modes;
};

/// Throws ConfigError on schema or validation errors.
ExperimentFile parse_experiment(const json& doc);
/// Throws IoError if the file cannot be read or is not JSON.
ExperimentFile load_experiment(const std::filesystem::path& path);

struct ProtocolFile {
    ProtocolConfig config;
    int n_shots = 1000;
    std::uint64_t seed = 1;
};

ProtocolFile parse_protocol(const json& doc);
ProtocolFile load_protocol(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);

json fit_report(const FitResult& fit);
json protocol_report(const ProtocolResult& result, const ProtocolFile& file);

} // namespace rydberg
