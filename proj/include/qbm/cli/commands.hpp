// commands.hpp — the experiments behind each CLI subcommand
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qbm/cli/config.hpp"
#include "qbm/cli/manifest.hpp"

namespace qbm::cli {

inline constexpr const char* command_names[] = {"spectrum", "decay",  "langevin", "noise",   "population",
                                                "asymptote", "khalfin", "tscan",   "validate"};

bool is_command(std::string_view name);

struct CommandOutput {
    std::vector<OutputFile> files;
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> warnings;
    bool failed{false}; // validate: at least one invariant check failed
};

// Library exceptions propagate (ConfigError, DomainError, NumericalError, ...).
CommandOutput run_command(const RunConfig& config);

} // namespace qbm::cli
