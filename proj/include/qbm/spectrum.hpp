// spectrum.hpp — exact diagonalization of the one-quantum arrowhead Hamiltonian
//
//   h = | Omega  g_1 ... g_N |
//       | g_1    w_1         |
//       | ...        ...     |
//       | g_N            w_N |
//
// Eigenvalues are the roots of the secular function
//   S(alpha) = alpha - Omega - sum_k g_k^2 / (alpha - w_k),
// one per interlacing interval (-inf, w_1), (w_1, w_2), ..., (w_N, inf).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/types.hpp"

namespace qbm::spectrum {

struct SpectralDecomposition {
    std::vector<double> alphas;  // ascending, N + 1 entries
    std::vector<double> weights; // |Phi_v|^2 = squared system component
    Matrix overlaps;             // (N + 1) x N, c_vk = <w_k | alpha_v>

    std::size_t levels() const noexcept { return alphas.size(); }
    std::size_t modes() const noexcept { return static_cast<std::size_t>(overlaps.cols()); }
    // Phi_v = +sqrt(|Phi_v|^2)
    std::vector<double> amplitudes() const;
};

inline constexpr std::size_t dense_oracle_limit = 2000;

// Throws PoleError when alpha equals a coupled bath frequency.
double secular_function(double alpha, const model::ModelConfig& config);

std::vector<double> eigenvalues(const model::ModelConfig& config);

// |Phi_v|^2 = [1 + sum_k (g_k / (alpha_v - w_k))^2]^-1. An alpha sitting on a
// decoupled mode (g_k = 0) is that mode's own eigenvalue and has weight 0.
std::vector<double> weights(const model::ModelConfig& config, std::span<const double> alphas);

// c_vk = Phi_v g_k / (alpha_v - w_k) with Phi_v >= 0.
Matrix overlaps(const model::ModelConfig& config, std::span<const double> alphas,
                std::span<const double> weights);

// Secular-equation route. Roots are kept relative to their nearest pole, so
// weights and overlaps do not suffer from alpha - w_k cancellation.
SpectralDecomposition decompose(const model::ModelConfig& config);

// Serial reference of decompose (same arithmetic, no OpenMP).
SpectralDecomposition decompose_serial(const model::ModelConfig& config);

// Independent route: cyclic Jacobi on the dense (N+1) x (N+1) matrix.
// Throws CapabilityError for N > dense_oracle_limit.
SpectralDecomposition dense_oracle(const model::ModelConfig& config);

} // namespace qbm::spectrum
