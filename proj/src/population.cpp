// population.cpp — exact relaxation, asymptotic occupation, low-T scaling

#include "qbm/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbm/dynamics.hpp"
#include "qbm/error.hpp"
#include "qbm/kernels.hpp"
#include "qbm/perturbation.hpp"
#include "qbm/quadrature.hpp"

namespace qbm::population {

namespace {

// Upper limit for a thermally weighted rho integral: weights below e^-45 are dropped.
double thermal_cut(const resolvent::ResolventModel& model, double beta) {
    return std::min(model.support_hi(), std::max(model.support_lo(), 0.0) + 45.0 / beta);
}

double weighted_integral(const resolvent::ResolventModel& model, double beta, const quad::RealFn& weight) {
    const double lo = model.support_lo();
    const double hi = thermal_cut(model, beta);
    if (!(hi > lo)) return 0.0;
    auto bp = model.breakpoints();
    // Thermal scale 1/beta as extra panel edges near the threshold.
    for (double k = 1.0; k <= 32.0; k *= 2.0) bp.push_back(lo + k / beta);
    quad::Options opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-300;
    const auto r = quad::integrate([&](double w) { return model.spectral_density(w) * weight(w); }, lo, hi, bp,
                                   opts);
    if (!r.converged) throw NumericalError("population: thermal quadrature did not converge");
    return r.value;
}

} // namespace

PopulationTrajectory exact_trajectory(const spectrum::SpectralDecomposition& spec,
                                      const model::ThermalState& thermal, double n0,
                                      std::span<const double> times, double beta) {
    if (thermal.occupations.size() != spec.modes())
        throw DomainError("exact_trajectory: thermal state does not match the spectrum");
    if (!(n0 >= 0.0) || !std::isfinite(n0)) throw DomainError("exact_trajectory: N0 must be finite and >= 0");
    require_time_grid(times);

    const auto survival = dynamics::survival_amplitude(spec, times);
    const auto bath = kernels::bath_projection_parallel(spec.amplitudes(), spec.alphas, spec.overlaps,
                                                        thermal.occupations, times);
    PopulationTrajectory out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    out.beta = beta;
    out.source = TrajectorySource::exact;
    for (std::size_t i = 0; i < times.size(); ++i)
        out.values[i] = std::norm(survival.values[i]) * n0 + bath.weighted[i];

    double sys = 0.0;
    double env = 0.0;
    for (std::size_t v = 0; v < spec.levels(); ++v) {
        const double w = spec.weights[v];
        sys += w * w;
        double row = 0.0;
        for (std::size_t k = 0; k < spec.modes(); ++k) {
            const double c = spec.overlaps(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(k));
            row += thermal.occupations[k] * c * c;
        }
        env += w * row;
    }
    out.asymptote = sys * n0 + env;
    return out;
}

PopulationTrajectory van_kampen(double gamma, double beta, double omega, double n0,
                                std::span<const double> times) {
    PopulationTrajectory out;
    out.times.assign(times.begin(), times.end());
    out.values = perturbation::van_kampen_trajectory(gamma, beta, omega, n0, times);
    out.asymptote = std::isinf(beta) ? 0.0 : model::bose_occupation(beta, omega);
    out.beta = beta;
    out.source = TrajectorySource::van_kampen;
    return out;
}

double asymptotic_population(const resolvent::ResolventModel& model, double beta) {
    if (!(beta > 0.0)) throw DomainError("asymptotic_population: beta must be > 0");
    if (std::isinf(beta)) return 0.0;
    return weighted_integral(model, beta, [beta](double w) { return 1.0 / std::expm1(beta * w); });
}

double low_temp_population(const resolvent::ResolventModel& model, double beta) {
    if (!(beta > 0.0)) throw DomainError("low_temp_population: beta must be > 0");
    if (std::isinf(beta)) return 0.0;
    return weighted_integral(model, beta, [beta](double w) { return std::exp(-beta * w); });
}

ScalingFit temperature_scan(const resolvent::ResolventModel& model, std::span<const double> betas) {
    if (betas.size() < 4) throw DomainError("temperature_scan: need at least 4 temperatures");
    for (double b : betas)
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("temperature_scan: beta values must be finite and > 0");

    ScalingFit fit;
    fit.temperatures.resize(betas.size());
    fit.populations.resize(betas.size());
    const auto count = static_cast<std::ptrdiff_t>(betas.size());
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto u = static_cast<std::size_t>(i);
        try {
            fit.temperatures[u] = 1.0 / betas[u];
            fit.populations[u] = asymptotic_population(model, betas[u]);
        } catch (const std::exception& e) {
#pragma omp critical(qbm_population_scan)
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw NumericalError("temperature_scan: " + failure);

    const double t_lo = *std::min_element(fit.temperatures.begin(), fit.temperatures.end());
    const double t_hi = *std::max_element(fit.temperatures.begin(), fit.temperatures.end());
    if (t_hi / t_lo < 100.0) fit.warnings.push_back("scan spans less than two decades in temperature");

    const auto pl = quad::power_law_fit(fit.temperatures, fit.populations);
    fit.exponent = pl.slope;
    fit.prefactor = std::exp(pl.intercept);
    fit.r_squared = pl.r_squared;
    fit.threshold_exponent = fit.exponent - 1.0;
    fit.q = (fit.threshold_exponent + 2.0) / (fit.threshold_exponent + 1.0);
    fit.energy_exponent = fit.exponent;
    fit.heat_capacity_exponent = fit.exponent - 1.0;
    if (pl.r_squared < scan_min_r_squared)
        fit.warnings.push_back("R^2 below 0.995: scan is probably not in the low-temperature regime");
    if (!(fit.q > 1.0 && fit.q < 2.0)) fit.warnings.push_back("fitted q lies outside (1, 2)");
    return fit;
}

double tsallis_occupation(double q, double beta, double omega) {
    if (!(q > 1.0 && q < 2.0)) throw DomainError("tsallis_occupation: q must satisfy 1 < q < 2");
    const double x = beta * omega;
    if (!(x > 0.0) || std::isnan(x)) throw DomainError("tsallis_occupation: beta * omega must be > 0");
    const double e = q - 1.0;
    return 1.0 / std::expm1(std::log1p(e * x) / e);
}

} // namespace qbm::population
