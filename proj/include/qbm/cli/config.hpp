// config.hpp — JSON run configuration
//
// {
//   "system":   {"omega": 1, "mass": 1, "beta": 1 | "inf", "n0": 0},
//   "coupling": {"family": "power-exponential", "lambda": 0.01, "n": 1, "omega_c": 1}
//             | {"family": "window", "lambda": .., "lo": .., "hi": ..}
//             | {"family": "custom-table", "table": [[w, g2], ...], "n": 1},
//   "bath":     {"N": 2000, "omega_max": 10, "scheme": "midpoint" | "gauss-bin"}
//             | {"modes": [[w, g], ...]},
//   "grid":     {"t_min": 0, "t_max": 100, "samples": 101, "spacing": "linear" | "log"},
//   "commands": {"<name>": { section overrides and command parameters }}
// }
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbm/model.hpp"

namespace qbm::cli {

struct GridSpec {
    double t_min{0.0};
    double t_max{100.0};
    std::size_t samples{101};
    std::string spacing{"linear"};

    std::vector<double> times() const;
};

struct RunConfig {
    std::string command;
    nlohmann::json resolved; // every section with defaults filled in
    model::ModelConfig model;
    std::optional<model::CouplingFunction> coupling;
    GridSpec grid;
    nlohmann::json params;   // command parameters (non-section keys of commands.<name>)
};

inline constexpr const char* section_names[] = {"system", "coupling", "bath", "grid"};

// Reads a file; a run manifest is accepted too (its "config" member is used).
nlohmann::json read_document(const std::string& path);

// Throws ConfigError on any schema or physical violation.
RunConfig resolve(const nlohmann::json& document, const std::string& command);

// Typed parameter lookup with default; ConfigError on type mismatch.
double param_number(const nlohmann::json& params, const std::string& key, double fallback);
std::size_t param_count(const nlohmann::json& params, const std::string& key, std::size_t fallback);
bool param_flag(const nlohmann::json& params, const std::string& key, bool fallback);
std::vector<double> param_list(const nlohmann::json& params, const std::string& key,
                               const std::vector<double>& fallback);

} // namespace qbm::cli
