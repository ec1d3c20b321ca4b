// commands.cpp — one function per subcommand, each producing CSV tables and a results object

#include "qbm/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include "qbm/cli/csv.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/error.hpp"
#include "qbm/noise.hpp"
#include "qbm/perturbation.hpp"
#include "qbm/population.hpp"
#include "qbm/resolvent.hpp"
#include "qbm/spectrum.hpp"

namespace qbm::cli {

using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; store null instead.
json num(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

const model::CouplingFunction& need_coupling(const RunConfig& cfg) {
    if (!cfg.coupling) throw ConfigError("config: command '" + cfg.command + "' needs a 'coupling' section");
    return *cfg.coupling;
}

perturbation::PerturbativeConstants constants_of(const RunConfig& cfg) {
    return perturbation::constants(need_coupling(cfg), cfg.model.omega);
}

json constants_json(const perturbation::PerturbativeConstants& pc) {
    return {{"delta_omega", pc.delta_omega},
            {"gamma", pc.gamma},
            {"eta", pc.eta},
            {"window_lo", num(pc.window_lo())},
            {"window_hi", num(pc.window_hi())},
            {"window_nonempty", pc.window_nonempty()}};
}

void no_coupling_warning(CommandOutput& out, const char* what) {
    out.warnings.push_back(std::string("no 'coupling' section: ") + what + " columns are nan");
}

double median(std::vector<double> v) {
    if (v.empty()) return nan;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

std::vector<double> default_scan_betas(double omega) {
    return log_grid(5.0 / omega, 500.0 / omega, 21);
}

// ---------------------------------------------------------------------------

CommandOutput cmd_spectrum(const RunConfig& cfg) {
    CommandOutput out;
    const auto spec = spectrum::decompose(cfg.model);
    CsvTable t({"index", "alpha [freq]", "weight [1]"});
    for (std::size_t v = 0; v < spec.levels(); ++v)
        t.add_row({static_cast<double>(v), spec.alphas[v], spec.weights[v]});
    out.files.push_back({"spectrum.csv", t.render()});
    out.results = {{"levels", spec.levels()},
                   {"weight_sum", quad::pairwise_sum(spec.weights)},
                   {"alpha_min", spec.alphas.front()},
                   {"alpha_max", spec.alphas.back()}};
    return out;
}

CommandOutput cmd_decay(const RunConfig& cfg) {
    CommandOutput out;
    const auto times = cfg.grid.times();
    const auto spec = spectrum::decompose(cfg.model);
    const auto exact = dynamics::survival_amplitude(spec, times).magnitudes();
    std::vector<double> bw(times.size(), nan);
    std::vector<double> cont(times.size(), nan);
    if (cfg.coupling) {
        const auto pc = constants_of(cfg);
        bw = perturbation::breit_wigner_amplitude(cfg.model.omega, pc.delta_omega, pc.gamma, times).magnitudes();
        out.results["perturbative"] = constants_json(pc);
        if (param_flag(cfg.params, "continuum", true)) {
            try {
                const resolvent::ResolventModel model(*cfg.coupling, cfg.model.omega);
                cont = resolvent::survival_amplitude_continuum(model, times).magnitudes();
            } catch (const ResolutionError& e) {
                out.warnings.push_back(std::string("continuum amplitude skipped: ") + e.what());
                cont.assign(times.size(), nan);
            }
        }
    } else {
        no_coupling_warning(out, "Breit-Wigner and continuum");
    }
    CsvTable t({"t [1/freq]", "abs_A_exact [1]", "abs_A_breit_wigner [1]", "abs_A_continuum [1]"});
    for (std::size_t i = 0; i < times.size(); ++i) t.add_row({times[i], exact[i], bw[i], cont[i]});
    out.files.push_back({"decay.csv", t.render()});
    out.results["levels"] = spec.levels();
    return out;
}

CommandOutput cmd_langevin(const RunConfig& cfg) {
    CommandOutput out;
    const auto times = cfg.grid.times();
    const auto spec = spectrum::decompose(cfg.model);
    const double floor = param_number(cfg.params, "wronskian_floor", dynamics::default_wronskian_floor);
    const auto lc = dynamics::langevin_coefficients(spec, times, floor);
    CsvTable t({"t [1/freq]", "omega2 [freq^2]", "gamma [freq]", "wronskian [freq]", "singular [flag]"});
    for (std::size_t i = 0; i < times.size(); ++i)
        t.add_row({times[i], lc.omega2[i], lc.gamma[i], lc.wronskian[i], static_cast<double>(lc.singular[i])});
    out.files.push_back({"langevin.csv", t.render()});
    out.results["singular_count"] = lc.singular_count();
    if (lc.singular_count() > 0)
        out.warnings.push_back(std::to_string(lc.singular_count()) + " samples with |W| below the floor");
    if (cfg.coupling) {
        const auto pc = constants_of(cfg);
        out.results["perturbative"] = constants_json(pc);
        const double shifted = cfg.model.omega + pc.delta_omega;
        const double lo = 10.0 / cfg.model.omega;
        const double hi = 0.5 / pc.gamma;
        std::vector<double> w2;
        std::vector<double> g;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] < lo || times[i] > hi || lc.singular[i]) continue;
            w2.push_back(lc.omega2[i]);
            g.push_back(lc.gamma[i]);
        }
        out.results["plateau"] = {{"window", {lo, hi}},
                                  {"samples", w2.size()},
                                  {"omega2_median", num(median(w2))},
                                  {"gamma_median", num(median(g))},
                                  {"omega2_reference", shifted * shifted},
                                  {"gamma_reference", pc.gamma}};
    }
    return out;
}

CommandOutput cmd_noise(const RunConfig& cfg) {
    CommandOutput out;
    const auto times = cfg.grid.times();
    const auto thermal = model::thermal_state(cfg.model);
    const auto k = noise::autocorrelation_discrete(cfg.model, thermal, times);
    std::vector<double> kc(times.size(), nan);
    if (cfg.coupling) {
        try {
            kc = noise::autocorrelation_continuum(*cfg.coupling, cfg.model.beta, cfg.model.mass, cfg.model.omega,
                                                  times)
                     .values;
        } catch (const NumericalError& e) {
            out.warnings.push_back(std::string("continuum kernel skipped: ") + e.what());
        }
    } else {
        no_coupling_warning(out, "continuum kernel");
    }
    if (param_flag(cfg.params, "oracle", true)) {
        const auto o = noise::operator_oracle(cfg.model, thermal, times);
        double scale = 0.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            scale = std::max(scale, std::abs(o.values[i]));
            diff = std::max(diff, std::abs(o.values[i] - k.values[i]));
        }
        out.results["oracle_max_rel_diff"] = scale > 0.0 ? diff / scale : diff;
    }
    CsvTable t({"t [1/freq]", "K_discrete [freq^3/mass]", "K_continuum [freq^3/mass]"});
    for (std::size_t i = 0; i < times.size(); ++i) t.add_row({times[i], k.values[i], kc[i]});
    out.files.push_back({"noise.csv", t.render()});
    return out;
}

CommandOutput cmd_population(const RunConfig& cfg) {
    CommandOutput out;
    const auto times = cfg.grid.times();
    const auto spec = spectrum::decompose(cfg.model);
    const auto thermal = model::thermal_state(cfg.model);
    const auto exact = population::exact_trajectory(spec, thermal, cfg.model.n0, times, cfg.model.beta);
    std::vector<double> vk(times.size(), nan);
    out.results["asymptote_exact"] = exact.asymptote;
    if (cfg.coupling) {
        const auto rate = perturbation::damping_rate(*cfg.coupling, cfg.model.omega);
        if (rate.one_sided) out.warnings.push_back("g^2 jumps at Omega: damping rate taken from one side");
        const auto v = population::van_kampen(rate.value, cfg.model.beta, cfg.model.omega, cfg.model.n0, times);
        vk = v.values;
        out.results["gamma"] = rate.value;
        out.results["asymptote_van_kampen"] = v.asymptote;
    } else {
        no_coupling_warning(out, "van Kampen");
    }
    CsvTable t({"t [1/freq]", "N_exact [quanta]", "N_van_kampen [quanta]"});
    for (std::size_t i = 0; i < times.size(); ++i) t.add_row({times[i], exact.values[i], vk[i]});
    out.files.push_back({"population.csv", t.render()});
    return out;
}

CommandOutput cmd_asymptote(const RunConfig& cfg) {
    CommandOutput out;
    const auto& coupling = need_coupling(cfg);
    const auto pc = constants_of(cfg);
    const double shifted = cfg.model.omega + pc.delta_omega;
    if (!(shifted > 0.0)) throw DomainError("asymptote: shifted frequency Omega + dOmega is not positive");
    const resolvent::ResolventModel model(coupling, cfg.model.omega);
    const auto betas = param_list(cfg.params, "betas", {cfg.model.beta});
    CsvTable t({"beta [1/freq]", "N_inf [quanta]", "bose_shifted [quanta]"});
    json rows = json::array();
    for (double b : betas) {
        if (!(b > 0.0)) throw ConfigError("config: 'betas' entries must be > 0");
        const double n = population::asymptotic_population(model, b);
        const double bose = std::isinf(b) ? 0.0 : model::bose_occupation(b, shifted);
        t.add_row({b, n, bose});
        rows.push_back({{"beta", num(b)}, {"N_inf", n}, {"bose_shifted", bose},
                        {"rel_diff", bose > 0.0 ? std::abs(n - bose) / bose : 0.0}});
    }
    out.files.push_back({"asymptote.csv", t.render()});
    out.results = {{"perturbative", constants_json(pc)}, {"rows", rows}};
    return out;
}

CommandOutput cmd_khalfin(const RunConfig& cfg) {
    CommandOutput out;
    const auto& coupling = need_coupling(cfg);
    const auto pc = constants_of(cfg);
    const auto times = cfg.grid.times();
    const resolvent::ResolventModel model(coupling, cfg.model.omega);
    const auto series = resolvent::survival_amplitude_continuum(model, times);
    const auto mags = series.magnitudes();
    const auto bw = perturbation::breit_wigner_amplitude(cfg.model.omega, pc.delta_omega, pc.gamma, times).magnitudes();

    double t1 = param_number(cfg.params, "t1", nan);
    double t2 = param_number(cfg.params, "t2", nan);
    if (std::isnan(t1) || std::isnan(t2)) {
        const auto w = resolvent::default_tail_window(series, pc.gamma);
        if (std::isnan(t1)) t1 = w.first;
        if (std::isnan(t2)) t2 = w.second;
    }
    const auto fit = resolvent::khalfin_tail_fit(series, t1, t2);
    if (!fit.accepted) out.warnings.push_back("tail fit rejected: " + fit.reason);

    CsvTable t({"t [1/freq]", "abs_A [1]", "abs_A_breit_wigner [1]", "abs_A_fit [1]"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double f = times[i] > 0.0 ? fit.prefactor * std::pow(times[i], -fit.exponent) : nan;
        t.add_row({times[i], mags[i], bw[i], f});
    }
    out.files.push_back({"khalfin.csv", t.render()});
    out.results = {{"perturbative", constants_json(pc)},
                   {"window", {t1, t2}},
                   {"exponent", fit.exponent},
                   {"prefactor", fit.prefactor},
                   {"r_squared", fit.r_squared},
                   {"points", fit.points},
                   {"accepted", fit.accepted}};
    if (coupling.family() == model::CouplingFamily::power_exponential)
        out.results["expected_exponent"] = coupling.exponent() + 1.0;
    return out;
}

CommandOutput cmd_tscan(const RunConfig& cfg) {
    CommandOutput out;
    const auto& coupling = need_coupling(cfg);
    const resolvent::ResolventModel model(coupling, cfg.model.omega);
    const auto betas = param_list(cfg.params, "betas", default_scan_betas(cfg.model.omega));
    const auto fit = population::temperature_scan(model, betas);
    out.warnings = fit.warnings;
    CsvTable t({"T [freq]", "beta [1/freq]", "N_inf [quanta]", "exponent [1]", "q [1]"});
    for (std::size_t i = 0; i < betas.size(); ++i)
        t.add_row({fit.temperatures[i], betas[i], fit.populations[i], fit.exponent, fit.q});
    out.files.push_back({"tscan.csv", t.render()});
    out.results = {{"exponent", fit.exponent},
                   {"prefactor", fit.prefactor},
                   {"r_squared", fit.r_squared},
                   {"threshold_exponent", fit.threshold_exponent},
                   {"q", fit.q},
                   {"energy_exponent", fit.energy_exponent},
                   {"heat_capacity_exponent", fit.heat_capacity_exponent}};
    if (coupling.family() == model::CouplingFamily::power_exponential) {
        const double n = coupling.exponent();
        out.results["expected_exponent"] = n + 1.0;
        out.results["expected_q"] = (n + 2.0) / (n + 1.0);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct Check {
    std::string name;
    double value;
    double tolerance;
};

CommandOutput cmd_validate(const RunConfig& cfg) {
    CommandOutput out;
    std::vector<Check> checks;
    const auto times = cfg.grid.times();
    const auto spec = spectrum::decompose(cfg.model);
    const auto& w = cfg.model.bath.omega();

    checks.push_back({"weight_sum", std::abs(quad::pairwise_sum(spec.weights) - 1.0), 1e-10});

    double bad = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!(spec.alphas[k] <= w[k] && w[k] <= spec.alphas[k + 1])) bad += 1.0;
    checks.push_back({"interlacing_violations", bad, 0.0});

    {
        const auto a = dynamics::survival_amplitude(spec, times);
        const auto p = dynamics::bath_probability(spec, times);
        double dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            dev = std::max(dev, std::abs(std::norm(a.values[i]) + p[i] - 1.0));
        checks.push_back({"unitarity", dev, 1e-8});
    }

    if (cfg.model.bath.size() <= spectrum::dense_oracle_limit) {
        const auto ref = spectrum::dense_oracle(cfg.model);
        double scale = 0.0;
        for (double x : ref.alphas) scale = std::max(scale, std::abs(x));
        double ev = 0.0;
        double wt = 0.0;
        for (std::size_t v = 0; v < spec.levels(); ++v) {
            ev = std::max(ev, std::abs(spec.alphas[v] - ref.alphas[v]) / std::max(scale, 1e-300));
            wt = std::max(wt, std::abs(spec.weights[v] - ref.weights[v]));
        }
        checks.push_back({"dense_oracle_eigenvalues", ev, 1e-9});
        checks.push_back({"dense_oracle_weights", wt, 1e-8});
    } else {
        out.warnings.push_back("bath larger than the dense oracle limit: oracle checks skipped");
    }

    {
        const auto thermal = model::thermal_state(cfg.model);
        const auto k = noise::autocorrelation_discrete(cfg.model, thermal, times);
        const auto o = noise::operator_oracle(cfg.model, thermal, times);
        double scale = 0.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            scale = std::max(scale, std::abs(o.values[i]));
            diff = std::max(diff, std::abs(o.values[i] - k.values[i]));
        }
        checks.push_back({"noise_kernel_oracle", scale > 0.0 ? diff / scale : diff, 1e-10});
    }

    if (cfg.coupling) {
        const resolvent::ResolventModel model(*cfg.coupling, cfg.model.omega);
        checks.push_back({"spectral_normalization", std::abs(model.normalization() - 1.0), 1e-8});
        const double shift_scale = std::max(1.0, std::abs(model.level_shift(cfg.model.omega)));
        checks.push_back({"level_shift_table", model.table_max_error() / shift_scale, 1e-9});
        if (cfg.coupling->continuous_at(cfg.model.omega)) {
            const double a = perturbation::frequency_shift(*cfg.coupling, cfg.model.omega);
            const double b = model.level_shift(cfg.model.omega);
            checks.push_back({"frequency_shift_paths", std::abs(a - b) / std::max(std::abs(b), 1e-300), 1e-8});
        }
        // Same spectral integral with the Fourier kernel at t = -i beta and the Laplace kernel at beta.
        const double beta = 5.0 / cfg.model.omega;
        double laplace = population::low_temp_population(model, beta);
        for (const auto& b : model.bound_states()) laplace += b.weight * std::exp(-beta * b.energy);
        const auto fourier = resolvent::survival_amplitude_at(model, {0.0, -beta});
        checks.push_back({"laplace_fourier_duality",
                          std::abs(fourier - std::complex<double>(laplace, 0.0)) / std::abs(laplace), 1e-6});
    }

    CsvTable t({"check", "value [1]", "tolerance [1]", "pass"});
    bool all = true;
    json results = json::object();
    for (const auto& c : checks) {
        const bool pass = c.value <= c.tolerance;
        all = all && pass;
        t.add_row({c.name, format_number(c.value), format_number(c.tolerance), pass ? "true" : "false"});
        results[c.name] = {{"value", num(c.value)}, {"tolerance", c.tolerance}, {"pass", pass}};
        if (!pass) out.warnings.push_back("check failed: " + c.name);
    }
    out.files.push_back({"validate.csv", t.render()});
    out.results = {{"checks", results}, {"all_pass", all}};
    out.failed = !all;
    return out;
}

} // namespace

bool is_command(std::string_view name) {
    return std::any_of(std::begin(command_names), std::end(command_names),
                       [name](const char* c) { return name == c; });
}

CommandOutput run_command(const RunConfig& cfg) {
    const std::string& c = cfg.command;
    if (c == "spectrum") return cmd_spectrum(cfg);
    if (c == "decay") return cmd_decay(cfg);
    if (c == "langevin") return cmd_langevin(cfg);
    if (c == "noise") return cmd_noise(cfg);
    if (c == "population") return cmd_population(cfg);
    if (c == "asymptote") return cmd_asymptote(cfg);
    if (c == "khalfin") return cmd_khalfin(cfg);
    if (c == "tscan") return cmd_tscan(cfg);
    if (c == "validate") return cmd_validate(cfg);
    throw ConfigError("unknown command '" + c + "'");
}

} // namespace qbm::cli
