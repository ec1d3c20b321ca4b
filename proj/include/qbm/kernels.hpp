// kernels.hpp — data-parallel inner loops, each in a serial reference form and
// an OpenMP form. The OpenMP forms parallelize only over independent output
// items (time samples, roots, panels); every per-item sum runs in a fixed
// serial order, so both forms return bit-identical results for any thread count.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qbm/types.hpp"

namespace qbm::kernels {

// Sums over eigenpairs (w_v, alpha_v) at each time t:
//   c_p(t) = sum_v w_v alpha_v^p cos(alpha_v t),  s_p(t) = sum_v w_v alpha_v^p sin(alpha_v t)
// for p = 0, 1, 2.
struct SpectralMoments {
    std::vector<double> c0, s0, c1, s1, c2, s2;
};

SpectralMoments spectral_moments_serial(std::span<const double> weights,
                                        std::span<const double> alphas,
                                        std::span<const double> times);
SpectralMoments spectral_moments_parallel(std::span<const double> weights,
                                          std::span<const double> alphas,
                                          std::span<const double> times);

// sum_m coeff_m cos(freq_m t) at each time.
std::vector<double> cosine_series_serial(std::span<const double> coeffs,
                                         std::span<const double> freqs,
                                         std::span<const double> times);
std::vector<double> cosine_series_parallel(std::span<const double> coeffs,
                                           std::span<const double> freqs,
                                           std::span<const double> times);

// Bath-side probabilities of the one-quantum state. With amplitudes
//   A_k(t) = sum_v phi_v c_vk exp(-i alpha_v t)
// returns per time: total = sum_k |A_k|^2 and weighted = sum_k occ_k |A_k|^2.
struct BathProjection {
    std::vector<double> total;
    std::vector<double> weighted;
};

BathProjection bath_projection_serial(std::span<const double> phi,
                                      std::span<const double> alphas, const Matrix& overlaps,
                                      std::span<const double> occupations,
                                      std::span<const double> times);
BathProjection bath_projection_parallel(std::span<const double> phi,
                                        std::span<const double> alphas, const Matrix& overlaps,
                                        std::span<const double> occupations,
                                        std::span<const double> times);

// Secular equation of the arrowhead Hamiltonian restricted to coupled modes:
//   S(alpha) = alpha - system_freq - sum_k g2_k / (alpha - poles_k),
// poles strictly increasing, all g2_k > 0. One root per interlacing interval.
struct SecularProblem {
    double system_freq{0.0};
    std::span<const double> poles;
    std::span<const double> g2;
};

// A root stored as alpha = poles[anchor] + offset, so that alpha - poles_k
// is formed as (poles[anchor] - poles_k) + offset without cancellation.
struct SecularRoot {
    std::size_t anchor{0};
    double offset{0.0};
    int iterations{0};
};

// Root of interval j (0 <= j <= poles.size()); interval 0 is (-inf, poles_0).
SecularRoot solve_secular_interval(const SecularProblem& problem, std::size_t interval);

std::vector<SecularRoot> secular_roots_serial(const SecularProblem& problem);
std::vector<SecularRoot> secular_roots_parallel(const SecularProblem& problem);

// Fixed panels [edges_i, edges_{i+1}] for an integrand f, each refined
// locally until err <= max(abs_share, rel_tol * int |f|).
struct Panel {
    double lo{0.0};
    double hi{0.0};
};

struct PanelValue {
    std::complex<double> value{};
    double error{0.0};
    bool converged{true};
};

using ComplexFn = std::function<std::complex<double>(double)>;

PanelValue integrate_panel(const ComplexFn& f, Panel panel, double rel_tol, double abs_tol);

std::vector<PanelValue> panel_quadrature_serial(const ComplexFn& f, std::span<const Panel> panels,
                                                double rel_tol, double abs_tol_total);
std::vector<PanelValue> panel_quadrature_parallel(const ComplexFn& f,
                                                  std::span<const Panel> panels,
                                                  double rel_tol, double abs_tol_total);

} // namespace qbm::kernels
