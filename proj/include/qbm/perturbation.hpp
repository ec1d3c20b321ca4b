// perturbation.hpp — second-order perturbation theory for the oscillator in the bath
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/types.hpp"

namespace qbm::perturbation {

struct PerturbativeConstants {
    double delta_omega{0.0};
    double gamma{0.0};
    double eta{0.0}; // FWHM of g^2

    // Validity window 4 pi / eta << t << 1 / gamma.
    double window_lo() const;
    double window_hi() const;
    bool window_nonempty() const;
};

// delta Omega = PV int g^2(w) / (Omega - w) dw. Throws DomainError when g^2 jumps at Omega.
double frequency_shift(const model::CouplingFunction& coupling, double omega);

// PV sum over discrete modes, skipping |w_k - Omega| < 1e-12.
double discrete_frequency_shift(const model::BathSpec& bath, double omega);

struct DampingRate {
    double value{0.0};
    bool one_sided{false}; // g^2 jumps at Omega; value taken from the inner side
};

// gamma = 2 pi g^2(Omega).
DampingRate damping_rate(const model::CouplingFunction& coupling, double omega);

// Full width at half maximum of g^2.
double fwhm(const model::CouplingFunction& coupling);

PerturbativeConstants constants(const model::CouplingFunction& coupling, double omega);

// delta_t(alpha) = sin^2(alpha t) / (pi alpha^2 t), t/pi at alpha = 0.
double delta_t(double alpha, double t);

// State 0 is the system level, states 1..N the bath modes.
struct TransitionRates {
    double time{0.0};
    Matrix rates;         // Gamma_nm
    Matrix probabilities; // delta_nm + Gamma_nm t
    std::vector<std::string> warnings;
};

// Warnings are issued when t leaves the validity window of `window`.
TransitionRates transition_rates(const model::ModelConfig& config, double t,
                                 const std::optional<PerturbativeConstants>& window = std::nullopt);

// <N(t)> = exp(-gamma t) N0 + (1 - exp(-gamma t)) nbar(beta, Omega); beta = +inf gives nbar = 0.
std::vector<double> van_kampen_trajectory(double gamma, double beta, double omega, double n0,
                                          std::span<const double> times);

// exp(-i (Omega + dOmega) t) exp(-gamma t / 2)
AmplitudeSeries breit_wigner_amplitude(double omega, double delta_omega, double gamma,
                                       std::span<const double> times);

// First-order A_{Omega m}(t) = g (exp(-i w t) - exp(-i Omega t)) / (w - Omega),
// evaluated as g exp(-i (w + Omega) t / 2) (-2i) sin((w - Omega) t / 2) / (w - Omega).
AmplitudeSeries first_order_transition_amplitude(double g, double omega_m, double omega,
                                                 std::span<const double> times);

// Its second time derivative: -g (w + Omega) exp(-i w t) - Omega^2 A(t).
AmplitudeSeries first_order_transition_acceleration(double g, double omega_m, double omega,
                                                    std::span<const double> times);

} // namespace qbm::perturbation
