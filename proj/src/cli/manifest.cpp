// manifest.cpp — manifest serialization and output writing

#include "qbm/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "qbm/cli/csv.hpp"
#include "qbm/error.hpp"

namespace qbm::cli {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["command"] = command;
    j["timestamp"] = timestamp;
    j["threads"] = threads;
    j["config"] = config;
    nlohmann::json sums = nlohmann::json::object();
    for (const auto& f : outputs) sums[f.name] = {{"fnv1a64", fnv1a_hex(f.content)}, {"bytes", f.content.size()}};
    j["outputs"] = sums;
    j["warnings"] = warnings;
    j["results"] = results;
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

} // namespace

void write_run(const std::string& dir, const RunManifest& manifest) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    for (const auto& f : manifest.outputs) write_bytes(fs::path(dir) / f.name, f.content);
    write_bytes(fs::path(dir) / "manifest.json", manifest.to_json().dump(2) + "\n");
}

} // namespace qbm::cli
