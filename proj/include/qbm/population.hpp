// population.hpp — mean occupation of the system oscillator
#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/resolvent.hpp"
#include "qbm/spectrum.hpp"

namespace qbm::population {

enum class TrajectorySource { exact, van_kampen };

struct PopulationTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    double asymptote{0.0}; // infinite-time average
    double beta{0.0};
    TrajectorySource source{TrajectorySource::exact};
};

// <N(t)> = P_00(t) N0 + sum_k P_0k(t) <N_k(0)>. The asymptote is the exact
// time average N0 sum_v w_v^2 + sum_k <N_k> sum_v w_v c_vk^2.
PopulationTrajectory exact_trajectory(const spectrum::SpectralDecomposition& spec,
                                      const model::ThermalState& thermal, double n0,
                                      std::span<const double> times, double beta = 0.0);

PopulationTrajectory van_kampen(double gamma, double beta, double omega, double n0,
                                std::span<const double> times);

// int rho(w) / (exp(beta w) - 1) dw; 0 at beta = inf.
double asymptotic_population(const resolvent::ResolventModel& model, double beta);

// int rho(w) exp(-beta w) dw by direct quadrature.
double low_temp_population(const resolvent::ResolventModel& model, double beta);

struct ScalingFit {
    std::vector<double> temperatures;
    std::vector<double> populations;
    double exponent{0.0};              // <N> ~ T^exponent
    double prefactor{0.0};
    double r_squared{0.0};
    double threshold_exponent{0.0};    // n = exponent - 1
    double q{0.0};                     // (n + 2) / (n + 1)
    double energy_exponent{0.0};       // E ~ T^(n+1)
    double heat_capacity_exponent{0.0}; // C_v ~ T^n
    std::vector<std::string> warnings;
};

inline constexpr double scan_min_r_squared = 0.995;

// Log-log fit of asymptotic_population against T = 1/beta. Warns when R^2 < 0.995.
ScalingFit temperature_scan(const resolvent::ResolventModel& model, std::span<const double> betas);

// 1 / ([1 + (q - 1) beta w]^(1/(q-1)) - 1), 1 < q < 2, beta w > 0.
double tsallis_occupation(double q, double beta, double omega);

} // namespace qbm::population
