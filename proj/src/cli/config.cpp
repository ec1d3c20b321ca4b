// config.cpp — schema checks, defaults and per-command overrides

#include "qbm/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qbm/error.hpp"
#include "qbm/types.hpp"

namespace qbm::cli {

using nlohmann::json;

namespace {

void fail(const std::string& msg) {
    throw ConfigError("config: " + msg);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail("'" + where + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) fail("unknown key '" + where + "." + key + "'");
}

double number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail("'" + where + "." + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("'" + where + "." + key + "' must be finite");
    return x;
}

double beta_value(const json& system) {
    if (!system.contains("beta")) return 1.0;
    const auto& v = system.at("beta");
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        fail("'system.beta' must be a number or \"inf\"");
    }
    if (!v.is_number()) fail("'system.beta' must be a number or \"inf\"");
    const double b = v.get<double>();
    if (!(b > 0.0) || !std::isfinite(b)) fail("'system.beta' must be finite and > 0 (use \"inf\" for T = 0)");
    return b;
}

std::vector<std::pair<double, double>> pairs(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) fail("'" + where + "' must be a non-empty array of [x, y] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            fail("'" + where + "' entries must be [number, number]");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

} // namespace

std::vector<double> GridSpec::times() const {
    try {
        if (spacing == "log") return log_grid(t_min, t_max, samples);
        return linear_grid(t_min, t_max, samples);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: grid: ") + e.what());
    }
}

json read_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) return doc.at("config");
    return doc;
}

RunConfig resolve(const json& document, const std::string& command) {
    if (!document.is_object()) fail("document must be a JSON object");
    only_keys(document, "<root>", {"system", "coupling", "bath", "grid", "commands"});

    json base = document;
    base.erase("commands");
    json params = json::object();
    if (document.contains("commands")) {
        const auto& cmds = document.at("commands");
        if (!cmds.is_object()) fail("'commands' must be an object");
        if (cmds.contains(command)) {
            const auto& patch = cmds.at(command);
            if (!patch.is_object()) fail("'commands." + command + "' must be an object");
            for (const auto& [key, value] : patch.items()) {
                if (key == "system" || key == "coupling" || key == "bath" || key == "grid") {
                    if (!base.contains(key)) base[key] = json::object();
                    base[key].merge_patch(value);
                } else {
                    params[key] = value;
                }
            }
        }
    }

    RunConfig cfg;
    cfg.command = command;
    cfg.params = params;

    // system
    const json system = base.value("system", json::object());
    only_keys(system, "system", {"omega", "mass", "beta", "n0"});
    cfg.model.omega = number(system, "system", "omega", 1.0);
    cfg.model.mass = number(system, "system", "mass", 1.0);
    cfg.model.beta = beta_value(system);
    cfg.model.n0 = number(system, "system", "n0", 0.0);
    json r_system = {{"omega", cfg.model.omega}, {"mass", cfg.model.mass}, {"n0", cfg.model.n0}};
    r_system["beta"] = std::isinf(cfg.model.beta) ? json("inf") : json(cfg.model.beta);

    // coupling
    json r_coupling;
    if (base.contains("coupling")) {
        const json& c = base.at("coupling");
        if (!c.is_object()) fail("'coupling' must be an object");
        const std::string family = c.value("family", std::string("power-exponential"));
        if (family == "power-exponential") {
            only_keys(c, "coupling", {"family", "lambda", "n", "omega_c"});
            if (!c.contains("lambda")) fail("'coupling.lambda' is required");
            const double lambda = number(c, "coupling", "lambda", 0.0);
            const double n = number(c, "coupling", "n", 1.0);
            const double wc = number(c, "coupling", "omega_c", 1.0);
            cfg.coupling = model::CouplingFunction::power_exponential(lambda, n, wc);
            r_coupling = {{"family", family}, {"lambda", lambda}, {"n", n}, {"omega_c", wc}};
        } else if (family == "window") {
            only_keys(c, "coupling", {"family", "lambda", "lo", "hi"});
            if (!c.contains("lambda") || !c.contains("lo") || !c.contains("hi"))
                fail("window coupling needs 'lambda', 'lo' and 'hi'");
            const double lambda = number(c, "coupling", "lambda", 0.0);
            const double lo = number(c, "coupling", "lo", 0.0);
            const double hi = number(c, "coupling", "hi", 0.0);
            cfg.coupling = model::CouplingFunction::window(lambda, lo, hi);
            r_coupling = {{"family", family}, {"lambda", lambda}, {"lo", lo}, {"hi", hi}};
        } else if (family == "custom-table") {
            only_keys(c, "coupling", {"family", "table", "n"});
            if (!c.contains("table")) fail("custom-table coupling needs 'table'");
            auto table = pairs(c.at("table"), "coupling.table");
            const double n = number(c, "coupling", "n", 1.0);
            cfg.coupling = model::CouplingFunction::custom_table(table, n);
            r_coupling = {{"family", family}, {"table", c.at("table")}, {"n", n}};
        } else {
            fail("unknown coupling family '" + family + "'");
        }
    }

    // bath
    const json bath = base.value("bath", json::object());
    json r_bath;
    if (bath.contains("modes")) {
        only_keys(bath, "bath", {"modes"});
        std::vector<double> w;
        std::vector<double> g;
        for (const auto& [wk, gk] : pairs(bath.at("modes"), "bath.modes")) {
            w.push_back(wk);
            g.push_back(gk);
        }
        cfg.model.bath = model::BathSpec(std::move(w), std::move(g));
        r_bath = {{"modes", bath.at("modes")}};
    } else {
        only_keys(bath, "bath", {"N", "omega_max", "scheme"});
        if (!cfg.coupling) fail("a bath without explicit 'modes' needs a 'coupling' section");
        const double n_raw = number(bath, "bath", "N", 200.0);
        if (!(n_raw >= 1.0) || n_raw != std::floor(n_raw)) fail("'bath.N' must be a positive integer");
        const auto n = static_cast<std::size_t>(n_raw);
        const double wmax =
            number(bath, "bath", "omega_max", model::default_omega_max(*cfg.coupling, cfg.model.omega));
        const std::string scheme = bath.value("scheme", std::string("midpoint"));
        model::DiscretizationScheme s;
        if (scheme == "midpoint")
            s = model::DiscretizationScheme::midpoint;
        else if (scheme == "gauss-bin")
            s = model::DiscretizationScheme::gauss_bin;
        else
            fail("'bath.scheme' must be \"midpoint\" or \"gauss-bin\"");
        cfg.model.bath = model::discretize(*cfg.coupling, n, wmax, s);
        r_bath = {{"N", n}, {"omega_max", wmax}, {"scheme", scheme}};
    }
    cfg.model.validate();

    // grid
    const json grid = base.value("grid", json::object());
    only_keys(grid, "grid", {"t_min", "t_max", "samples", "spacing"});
    cfg.grid.t_min = number(grid, "grid", "t_min", 0.0);
    cfg.grid.t_max = number(grid, "grid", "t_max", 100.0);
    const double samples = number(grid, "grid", "samples", 101.0);
    if (!(samples >= 1.0) || samples != std::floor(samples)) fail("'grid.samples' must be a positive integer");
    cfg.grid.samples = static_cast<std::size_t>(samples);
    cfg.grid.spacing = grid.value("spacing", std::string("linear"));
    if (cfg.grid.spacing != "linear" && cfg.grid.spacing != "log")
        fail("'grid.spacing' must be \"linear\" or \"log\"");
    (void)cfg.grid.times();
    json r_grid = {{"t_min", cfg.grid.t_min},
                   {"t_max", cfg.grid.t_max},
                   {"samples", cfg.grid.samples},
                   {"spacing", cfg.grid.spacing}};

    cfg.resolved = {{"system", r_system}, {"bath", r_bath}, {"grid", r_grid}};
    if (!r_coupling.is_null()) cfg.resolved["coupling"] = r_coupling;
    if (!params.empty()) cfg.resolved["commands"] = {{command, params}};
    return cfg;
}

double param_number(const json& params, const std::string& key, double fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail("parameter '" + key + "' must be a finite number");
    return v.get<double>();
}

std::size_t param_count(const json& params, const std::string& key, std::size_t fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) fail("parameter '" + key + "' must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

bool param_flag(const json& params, const std::string& key, bool fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (!v.is_boolean()) fail("parameter '" + key + "' must be true or false");
    return v.get<bool>();
}

std::vector<double> param_list(const json& params, const std::string& key, const std::vector<double>& fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (!v.is_array()) fail("parameter '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail("parameter '" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace qbm::cli
