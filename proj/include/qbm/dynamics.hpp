// dynamics.hpp — exact one-quantum evolution from a spectral decomposition
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/spectrum.hpp"
#include "qbm/types.hpp"

namespace qbm::dynamics {

// A(t) = sum_v |Phi_v|^2 exp(-i alpha_v t); a = Re A, b = -Im A.
AmplitudeSeries survival_amplitude(const spectrum::SpectralDecomposition& spec,
                                   std::span<const double> times);

// A_k(t) = sum_v Phi_v c_vk exp(-i alpha_v t); k is a 0-based mode index.
AmplitudeSeries transition_amplitude(const spectrum::SpectralDecomposition& spec, std::size_t k,
                                     std::span<const double> times);

// sum_k |A_k(t)|^2 at each time.
std::vector<double> bath_probability(const spectrum::SpectralDecomposition& spec,
                                     std::span<const double> times);

// a, b and their first two time derivatives, all as analytic spectral sums.
struct Quadratures {
    std::vector<double> a, b, a_dot, b_dot, a_ddot, b_ddot;
};

Quadratures quadratures(const spectrum::SpectralDecomposition& spec, std::span<const double> times);

// <X(t)> = a(t) X0 + b(t) P0 / (M Omega).
std::vector<double> mean_trajectory(const spectrum::SpectralDecomposition& spec, double x0, double p0,
                                    const model::ModelConfig& config, std::span<const double> times);

struct LangevinCoefficients {
    std::vector<double> times;
    std::vector<double> omega2;     // NaN at singular samples
    std::vector<double> gamma;      // NaN at singular samples
    std::vector<double> wronskian;  // W = a b' - b a'
    std::vector<std::uint8_t> singular;
    // x'' + Gamma x' + Omega^2 x for x = a and x = b (NaN at singular samples).
    std::vector<double> residual_a;
    std::vector<double> residual_b;

    std::size_t singular_count() const;
};

inline constexpr double default_wronskian_floor = 1e-8;

// Solves x'' + Gamma(t) x' + Omega^2(t) x = 0 for x in {a, b} at each time.
LangevinCoefficients langevin_coefficients(const spectrum::SpectralDecomposition& spec,
                                           std::span<const double> times,
                                           double wronskian_floor = default_wronskian_floor);

} // namespace qbm::dynamics
