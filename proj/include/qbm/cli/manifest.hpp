// manifest.hpp — run manifest written next to the CSV outputs
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qbm::cli {

inline constexpr const char* tool_name = "qbm";
inline constexpr const char* tool_version = "0.1.0";

struct OutputFile {
    std::string name;    // relative to the output directory
    std::string content;
};

struct RunManifest {
    std::string command;
    nlohmann::json config;   // resolved configuration; feed back via --config to reproduce
    std::string timestamp;   // UTC, ISO 8601
    int threads{1};
    std::vector<OutputFile> outputs;
    std::vector<std::string> warnings;
    nlohmann::json results = nlohmann::json::object();

    nlohmann::json to_json() const; // outputs appear as {name: fnv1a checksum}
};

std::string utc_timestamp();

// Writes every output and manifest.json into dir (created if needed).
void write_run(const std::string& dir, const RunManifest& manifest);

} // namespace qbm::cli
