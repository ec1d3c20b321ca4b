// test_cli.cpp — configuration resolution, CSV format, manifests, command outputs

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbm/cli/commands.hpp"
#include "qbm/cli/config.hpp"
#include "qbm/cli/csv.hpp"
#include "qbm/cli/manifest.hpp"
#include "qbm/error.hpp"

using namespace qbm;
using nlohmann::json;

namespace {

json resonant_doc() {
    return json::parse(R"({"system": {"omega": 1, "beta": "inf"},
                           "bath": {"modes": [[1.0, 0.1]]},
                           "grid": {"t_max": 10, "samples": 5}})");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double to_double(const std::string& s) {
    double x = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), x);
    return x;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults are filled in and echoed") {
    const auto cfg = cli::resolve(resonant_doc(), "spectrum");
    CHECK(std::isinf(cfg.model.beta));
    CHECK(cfg.model.mass == 1.0);
    CHECK(cfg.resolved["system"]["beta"] == "inf");
    CHECK(cfg.resolved["grid"]["spacing"] == "linear");
    CHECK(cfg.grid.times().size() == 5);
    CHECK_FALSE(cfg.coupling.has_value());
}

TEST_CASE("command overrides patch sections and collect parameters") {
    auto doc = json::parse(R"({
      "system": {"omega": 1.0, "beta": 2.0},
      "coupling": {"lambda": 0.01, "n": 1, "omega_c": 1.0},
      "bath": {"N": 50, "omega_max": 5.0},
      "commands": {"asymptote": {"system": {"beta": 0.5}, "bath": {"N": 20}, "betas": [1, 2]}}
    })");
    const auto a = cli::resolve(doc, "asymptote");
    CHECK(a.model.beta == 0.5);
    CHECK(a.model.bath.size() == 20);
    CHECK(a.params["betas"].size() == 2);
    CHECK(cli::param_list(a.params, "betas", {}) == std::vector<double>{1.0, 2.0});
    const auto s = cli::resolve(doc, "spectrum");
    CHECK(s.model.beta == 2.0);
    CHECK(s.model.bath.size() == 50);
    CHECK(s.params.empty());
    // Default omega_max: 10 max(Omega, n omega_c).
    doc["bath"].erase("omega_max");
    CHECK(cli::resolve(doc, "spectrum").resolved["bath"]["omega_max"] == 10.0);
}

TEST_CASE("schema violations are configuration errors") {
    auto bad = resonant_doc();
    bad["system"]["omgea"] = 1.0;
    CHECK_THROWS_AS(cli::resolve(bad, "spectrum"), ConfigError);
    bad = resonant_doc();
    bad["system"]["beta"] = -1.0;
    CHECK_THROWS_AS(cli::resolve(bad, "spectrum"), ConfigError);
    bad = resonant_doc();
    bad["grid"]["spacing"] = "cubic";
    CHECK_THROWS_AS(cli::resolve(bad, "spectrum"), ConfigError);
    bad = resonant_doc();
    bad["bath"] = json::parse(R"({"N": 10})");
    CHECK_THROWS_AS(cli::resolve(bad, "spectrum"), ConfigError); // no coupling to discretize
    bad = resonant_doc();
    bad["coupling"] = json::parse(R"({"family": "gaussian", "lambda": 1})");
    CHECK_THROWS_AS(cli::resolve(bad, "spectrum"), ConfigError);
    CHECK_THROWS_AS(cli::param_count(json::parse(R"({"k": 1.5})"), "k", 1), ConfigError);
    CHECK_THROWS_AS(cli::run_command(cli::resolve(resonant_doc(), "tscan")), ConfigError);
}

TEST_CASE("number format: 17 significant digits, exact round trip") {
    CHECK(cli::format_number(0.1) == "1.0000000000000001e-01");
    CHECK(cli::format_number(-2.0) == "-2.0000000000000000e+00");
    CHECK(cli::format_number(std::nan("")) == "nan");
    CHECK(cli::format_number(-INFINITY) == "-inf");
    for (double x : {M_PI, 1e-300, 6.02214076e23, -0.0, 5e-324}) CHECK(to_double(cli::format_number(x)) == x);
}

TEST_CASE("FNV-1a checksums") {
    CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(cli::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("spectrum command on the resonant pair") {
    const auto out = cli::run_command(cli::resolve(resonant_doc(), "spectrum"));
    REQUIRE(out.files.size() == 1);
    const auto rows = parse_csv(out.files[0].content);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"index", "alpha [freq]", "weight [1]"});
    CHECK(to_double(rows[1][1]) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(to_double(rows[1][2]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(to_double(rows[2][1]) == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(to_double(rows[2][2]) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("decay with zero coupling has |A| = 1") {
    auto doc = resonant_doc();
    doc["bath"]["modes"] = json::parse("[[0.5, 0.0], [2.0, 0.0]]");
    const auto out = cli::run_command(cli::resolve(doc, "decay"));
    const auto rows = parse_csv(out.files[0].content);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(to_double(rows[i][1]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(out.warnings.empty()); // reference columns unavailable without a coupling section
}

TEST_CASE("khalfin command records an exponent near 2 for n = 1") {
    const auto doc = json::parse(R"({
      "system": {"omega": 1.0, "beta": "inf"},
      "coupling": {"lambda": 0.12979, "n": 1, "omega_c": 1.0},
      "bath": {"N": 50},
      "grid": {"t_min": 1.0, "t_max": 1000.0, "samples": 31, "spacing": "log"}
    })");
    const auto out = cli::run_command(cli::resolve(doc, "khalfin"));
    CHECK(out.results["accepted"] == true);
    CHECK(std::abs(out.results["exponent"].get<double>() - 2.0) < 0.2);
    const auto rows = parse_csv(out.files[0].content);
    CHECK(rows.size() == 32);
}

TEST_CASE("validate passes on a weak-coupling configuration") {
    const auto doc = json::parse(R"({
      "system": {"omega": 1.0, "beta": 1.0},
      "coupling": {"lambda": 0.0043263, "n": 1, "omega_c": 1.0},
      "bath": {"N": 200, "omega_max": 10.0},
      "grid": {"t_max": 50.0, "samples": 51}
    })");
    const auto out = cli::run_command(cli::resolve(doc, "validate"));
    CHECK(out.results["all_pass"] == true);
    CHECK_FALSE(out.failed);
}

TEST_CASE("validate passes on a window coupling with poles on both sides of the band") {
    const auto doc = json::parse(R"({
      "system": {"omega": 1.05, "beta": 2.0},
      "coupling": {"family": "window", "lambda": 0.2, "lo": 1.0, "hi": 2.0},
      "bath": {"N": 300},
      "grid": {"t_max": 50.0, "samples": 51}
    })");
    const auto out = cli::run_command(cli::resolve(doc, "validate"));
    CHECK(out.results["all_pass"] == true);
    CHECK_FALSE(out.failed);
}

TEST_CASE("manifest round trip reproduces the outputs") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "qbm_cli_manifest_test";
    fs::remove_all(dir);
    auto cfg = cli::resolve(resonant_doc(), "decay");
    auto res = cli::run_command(cfg);
    cli::RunManifest m;
    m.command = "decay";
    m.config = cfg.resolved;
    m.timestamp = cli::utc_timestamp();
    m.outputs = res.files;
    m.warnings = res.warnings;
    cli::write_run(dir.string(), m);
    REQUIRE(fs::exists(dir / "manifest.json"));
    REQUIRE(fs::exists(dir / "decay.csv"));

    const auto doc = cli::read_document((dir / "manifest.json").string());
    const auto again = cli::run_command(cli::resolve(doc, "decay"));
    CHECK(again.files[0].content == res.files[0].content);
    std::ifstream in(dir / "manifest.json");
    const auto j = json::parse(in);
    CHECK(j["outputs"]["decay.csv"]["fnv1a64"] == cli::fnv1a_hex(res.files[0].content));
    CHECK(j["version"] == cli::tool_version);
    fs::remove_all(dir);
}

}
