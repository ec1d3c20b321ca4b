// noise.hpp — autocorrelation K(t) of the stochastic acceleration
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qbm/model.hpp"

namespace qbm::noise {

enum class KernelSource { discrete, operator_oracle, continuum, classical_limit };

// K(t) for t >= 0; K is even, negative times are never stored.
struct NoiseKernel {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::uint8_t> singular; // 1 where K is not finite (NaN stored)
    double beta{0.0};
    double mass{1.0};
    double omega{0.0};
    KernelSource source{KernelSource::discrete};
};

// coth(beta w / 2) = 2 <N> + 1; series 2/x + x/6 for x = beta w < 1e-3, 1 at beta = inf.
double coth_half(double beta, double omega);

// K(t) = (1 / 2 M Omega) sum_m (2 N_m + 1) g_m^2 (w_m + Omega)^2 cos(w_m t)
NoiseKernel autocorrelation_discrete(const model::ModelConfig& config, const model::ThermalState& thermal,
                                     std::span<const double> times);

// K = K1 + K2 assembled from first-order amplitudes A_{Omega m}, their second
// derivatives, and the thermal rules <b+ b> = N, <b b+> = N + 1.
NoiseKernel operator_oracle(const model::ModelConfig& config, const model::ThermalState& thermal,
                            std::span<const double> times);

// K(t) = (1 / 2M) int g^2(w) (w + Omega)^2 / Omega coth(beta w / 2) cos(w t) dw.
// Throws NumericalError when the panel quadrature does not converge.
NoiseKernel autocorrelation_continuum(const model::CouplingFunction& coupling, double beta, double mass,
                                      double omega, std::span<const double> times, double rel_tol = 1e-10);

// K(t) = (gamma T / M) d/dt coth(pi T t / hbar) = -(gamma T / M) a csch^2(a t), a = pi T / hbar.
// t = 0 is flagged singular; with hbar = 0 the kernel vanishes for t > 0.
NoiseKernel classical_limit_kernel(double gamma, double temperature, double mass, double hbar,
                                   std::span<const double> times);

// Finite-part integral of the classical kernel over [0, t_max]:
// (gamma T / M) [ int_0^t_max (1/(a t^2) - a csch^2(a t)) dt + 1/(a t_max) ],
// with the regular part done by quadrature. Tends to gamma T / M.
double white_noise_mass(double gamma, double temperature, double mass, double hbar, double t_max);

// Exponential decay rate of the classical kernel tail, 2 pi T / hbar.
double classical_tail_rate(double temperature, double hbar);

} // namespace qbm::noise
