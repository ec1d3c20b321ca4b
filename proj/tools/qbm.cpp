// qbm.cpp — command-line entry point: qbm <command> --config PATH [--out DIR] [--strict] [--threads K]

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbm/cli/commands.hpp"
#include "qbm/cli/config.hpp"
#include "qbm/cli/manifest.hpp"
#include "qbm/error.hpp"
#include "qbm/parallel.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_strict = 4;

int threads_from_env() {
    const char* env = std::getenv("QBM_THREADS");
    if (!env || !*env) return 0;
    try {
        const int n = std::stoi(env);
        if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "qbm: ignoring invalid QBM_THREADS='" << env << "'\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum oscillator in a harmonic bath: spectra, decay, Langevin coefficients, noise, populations"};
    std::vector<std::string> names(std::begin(qbm::cli::command_names), std::end(qbm::cli::command_names));
    std::string command;
    std::string config_path;
    std::string out_dir = "qbm_out";
    bool strict = false;
    int threads = 0;
    app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "JSON configuration (or a previous manifest.json)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--strict", strict, "Exit with code 4 when any regime warning is emitted");
    app.add_option("--threads", threads, "Worker threads (falls back to QBM_THREADS)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    if (threads <= 0) threads = threads_from_env();
    if (threads > 0) qbm::parallel::set_threads(threads);

    try {
        const auto cfg = qbm::cli::resolve(qbm::cli::read_document(config_path), command);
        auto result = qbm::cli::run_command(cfg);

        qbm::cli::RunManifest manifest;
        manifest.command = command;
        manifest.config = cfg.resolved;
        manifest.timestamp = qbm::cli::utc_timestamp();
        manifest.threads = qbm::parallel::max_threads();
        manifest.outputs = std::move(result.files);
        manifest.warnings = result.warnings;
        manifest.results = result.results;
        qbm::cli::write_run(out_dir, manifest);

        for (const auto& w : result.warnings) std::cerr << "qbm: warning: " << w << '\n';
        if (result.failed) {
            std::cerr << "qbm: " << command << ": invariant checks failed\n";
            return exit_numerical;
        }
        if (strict && !result.warnings.empty()) {
            std::cerr << "qbm: --strict: " << result.warnings.size() << " warning(s) treated as errors\n";
            return exit_strict;
        }
        return exit_ok;
    } catch (const qbm::ConfigError& e) {
        std::cerr << "qbm: " << e.what() << '\n';
        return exit_config;
    } catch (const qbm::DomainError& e) {
        std::cerr << "qbm: invalid parameters: " << e.what() << '\n';
        return exit_config;
    } catch (const qbm::NumericalError& e) {
        std::cerr << "qbm: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "qbm: error: " << e.what() << '\n';
        return exit_numerical;
    }
}
