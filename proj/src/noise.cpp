// noise.cpp — discrete, operator-level, continuum and classical noise kernels

#include "qbm/noise.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "qbm/error.hpp"
#include "qbm/kernels.hpp"
#include "qbm/perturbation.hpp"
#include "qbm/quadrature.hpp"

namespace qbm::noise {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void require_thermal(const model::ModelConfig& config, const model::ThermalState& thermal) {
    config.validate();
    if (thermal.occupations.size() != config.bath.size())
        throw DomainError("noise: thermal state does not match the bath");
    for (double n : thermal.occupations)
        if (!(n >= 0.0) || !std::isfinite(n)) throw DomainError("noise: occupations must be finite and >= 0");
}

NoiseKernel empty_kernel(std::span<const double> times, double beta, double mass, double omega,
                         KernelSource source) {
    require_time_grid(times);
    NoiseKernel k;
    k.times.assign(times.begin(), times.end());
    k.values.assign(times.size(), 0.0);
    k.singular.assign(times.size(), 0);
    k.beta = beta;
    k.mass = mass;
    k.omega = omega;
    k.source = source;
    return k;
}

// Symmetrized <X Y> for X = sum_m (x_m b_m^+ + x_m^* b_m), Y likewise, in a
// diagonal thermal state: <b_m^+ b_m'> = delta N_m, <b_m b_m'^+> = delta (N_m + 1).
double symmetrized(std::complex<double> x, std::complex<double> y, double occ) {
    const std::complex<double> xy = x * std::conj(y) * occ + std::conj(x) * y * (occ + 1.0);
    const std::complex<double> yx = y * std::conj(x) * occ + std::conj(y) * x * (occ + 1.0);
    return 0.5 * (xy + yx).real();
}

} // namespace

double coth_half(double beta, double omega) {
    if (std::isinf(beta)) return 1.0;
    const double x = beta * omega;
    if (!(x > 0.0)) throw DomainError("coth_half: beta * omega must be > 0");
    if (x < 1e-3) return 2.0 / x + x / 6.0;
    return 1.0 / std::tanh(0.5 * x);
}

NoiseKernel autocorrelation_discrete(const model::ModelConfig& config, const model::ThermalState& thermal,
                                     std::span<const double> times) {
    require_thermal(config, thermal);
    auto k = empty_kernel(times, config.beta, config.mass, config.omega, KernelSource::discrete);
    const auto& w = config.bath.omega();
    const auto& g = config.bath.g();
    std::vector<double> coeff(w.size());
    const double pre = 1.0 / (2.0 * config.mass * config.omega);
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double s = w[m] + config.omega;
        coeff[m] = pre * (2.0 * thermal.occupations[m] + 1.0) * g[m] * g[m] * s * s;
    }
    k.values = kernels::cosine_series_parallel(coeff, w, times);
    return k;
}

NoiseKernel operator_oracle(const model::ModelConfig& config, const model::ThermalState& thermal,
                            std::span<const double> times) {
    require_thermal(config, thermal);
    auto k = empty_kernel(times, config.beta, config.mass, config.omega, KernelSource::operator_oracle);
    const auto& w = config.bath.omega();
    const auto& g = config.bath.g();
    const double om = config.omega;
    // f = (2 M Omega)^-1/2 sum_m (A_m b_m^+ + h.c.); the prefactor squared is applied once.
    const double pre = 1.0 / (2.0 * config.mass * om);
    const std::vector<double> origin{0.0};

    std::vector<double> k1(times.size(), 0.0);
    std::vector<double> k2(times.size(), 0.0);
    for (std::size_t m = 0; m < w.size(); ++m) {
        if (g[m] == 0.0) continue;
        const auto acc0 = perturbation::first_order_transition_acceleration(g[m], w[m], om, origin).values[0];
        const auto amp = perturbation::first_order_transition_amplitude(g[m], w[m], om, times);
        const auto acc = perturbation::first_order_transition_acceleration(g[m], w[m], om, times);
        const double occ = thermal.occupations[m];
        for (std::size_t i = 0; i < times.size(); ++i) {
            k1[i] += symmetrized(acc0, acc.values[i], occ);
            k2[i] += om * om * symmetrized(acc0, amp.values[i], occ);
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) k.values[i] = pre * (k1[i] + k2[i]);
    return k;
}

NoiseKernel autocorrelation_continuum(const model::CouplingFunction& coupling, double beta, double mass,
                                      double omega, std::span<const double> times, double rel_tol) {
    if (!(beta > 0.0) || !(mass > 0.0) || !(omega > 0.0))
        throw DomainError("autocorrelation_continuum: beta, mass, Omega must be > 0");
    auto k = empty_kernel(times, beta, mass, omega, KernelSource::continuum);
    const double lo = std::max(0.0, coupling.support_lo());
    const double hi = std::isfinite(coupling.support_hi()) ? coupling.support_hi() : coupling.effective_upper(1e-18);
    const double pre = 1.0 / (2.0 * mass * omega);
    quad::RealFn integrand = [&](double w) {
        const double g2 = coupling(w);
        if (g2 == 0.0) return 0.0;
        const double s = w + omega;
        return pre * g2 * s * s * coth_half(beta, w);
    };
    quad::FourierOptions opts;
    opts.rel_tol = rel_tol;
    opts.breakpoints = coupling.kinks();
    opts.threshold_at_lower = (lo == 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto r = quad::fourier_integral(integrand, times[i], lo, hi, opts);
        if (!r.converged)
            throw NumericalError("autocorrelation_continuum: quadrature did not converge at t = " +
                                 std::to_string(times[i]) + " (error estimate " +
                                 std::to_string(r.error_estimate) + ")");
        k.values[i] = r.value.real();
    }
    return k;
}

NoiseKernel classical_limit_kernel(double gamma, double temperature, double mass, double hbar,
                                   std::span<const double> times) {
    if (!(gamma >= 0.0) || !(temperature > 0.0) || !(mass > 0.0) || !(hbar >= 0.0))
        throw DomainError("classical_limit_kernel: need gamma >= 0, T > 0, M > 0, hbar >= 0");
    auto k = empty_kernel(times, 1.0 / temperature, mass, 0.0, KernelSource::classical_limit);
    const double scale = gamma * temperature / mass;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t == 0.0) {
            k.values[i] = nan;
            k.singular[i] = 1;
            continue;
        }
        if (hbar == 0.0) { // delta concentrated at t = 0
            k.values[i] = 0.0;
            continue;
        }
        const double a = std::numbers::pi * temperature / hbar;
        const double s = std::sinh(a * t);
        k.values[i] = std::isinf(s) ? -0.0 : -scale * a / (s * s);
    }
    return k;
}

double white_noise_mass(double gamma, double temperature, double mass, double hbar, double t_max) {
    if (!(gamma >= 0.0) || !(temperature > 0.0) || !(mass > 0.0) || !(hbar >= 0.0) || !(t_max > 0.0))
        throw DomainError("white_noise_mass: need gamma >= 0, T, M, t_max > 0, hbar >= 0");
    const double scale = gamma * temperature / mass;
    if (hbar == 0.0) return scale;
    const double a = std::numbers::pi * temperature / hbar;
    // 1/(a t^2) - a csch^2(a t) = a [1/x^2 - csch^2 x], x = a t; series near x = 0.
    quad::RealFn regular = [a](double t) {
        const double x = a * t;
        if (x < 1e-3) {
            const double x2 = x * x;
            return a * (1.0 / 3.0 - x2 / 15.0 + 2.0 * x2 * x2 / 189.0);
        }
        const double s = std::sinh(x);
        return std::isinf(s) ? a / (x * x) : a * (1.0 / (x * x) - 1.0 / (s * s));
    };
    quad::Options opts;
    opts.rel_tol = 1e-12;
    const auto r = quad::integrate(regular, 0.0, t_max, opts);
    if (!r.converged) throw NumericalError("white_noise_mass: quadrature did not converge");
    return scale * (r.value + 1.0 / (a * t_max));
}

double classical_tail_rate(double temperature, double hbar) {
    if (!(temperature > 0.0) || !(hbar > 0.0)) throw DomainError("classical_tail_rate: T, hbar must be > 0");
    return 2.0 * std::numbers::pi * temperature / hbar;
}

} // namespace qbm::noise
