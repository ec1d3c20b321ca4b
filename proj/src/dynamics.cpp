// dynamics.cpp — survival / transition amplitudes and Langevin coefficient reconstruction

#include "qbm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbm/error.hpp"
#include "qbm/kernels.hpp"

namespace qbm::dynamics {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

} // namespace

AmplitudeSeries survival_amplitude(const spectrum::SpectralDecomposition& spec,
                                   std::span<const double> times) {
    require_time_grid(times);
    const auto m = kernels::spectral_moments_parallel(spec.weights, spec.alphas, times);
    AmplitudeSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.values[i] = Complex(m.c0[i], -m.s0[i]);
    return out;
}

AmplitudeSeries transition_amplitude(const spectrum::SpectralDecomposition& spec, std::size_t k,
                                     std::span<const double> times) {
    require_time_grid(times);
    if (k >= spec.modes()) throw DomainError("transition_amplitude: mode index out of range");
    const auto phi = spec.amplitudes();
    std::vector<double> coeff(spec.levels());
    for (std::size_t v = 0; v < coeff.size(); ++v)
        coeff[v] = phi[v] * spec.overlaps(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(k));
    const auto m = kernels::spectral_moments_parallel(coeff, spec.alphas, times);
    AmplitudeSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.values[i] = Complex(m.c0[i], -m.s0[i]);
    return out;
}

std::vector<double> bath_probability(const spectrum::SpectralDecomposition& spec,
                                     std::span<const double> times) {
    require_time_grid(times);
    const std::vector<double> none(spec.modes(), 0.0);
    return kernels::bath_projection_parallel(spec.amplitudes(), spec.alphas, spec.overlaps, none, times).total;
}

Quadratures quadratures(const spectrum::SpectralDecomposition& spec, std::span<const double> times) {
    require_time_grid(times);
    auto m = kernels::spectral_moments_parallel(spec.weights, spec.alphas, times);
    Quadratures q;
    q.a = std::move(m.c0);
    q.b = std::move(m.s0);
    q.a_dot.resize(times.size());
    q.a_ddot.resize(times.size());
    q.b_dot = std::move(m.c1);
    q.b_ddot.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        q.a_dot[i] = -m.s1[i];
        q.a_ddot[i] = -m.c2[i];
        q.b_ddot[i] = -m.s2[i];
    }
    return q;
}

std::vector<double> mean_trajectory(const spectrum::SpectralDecomposition& spec, double x0, double p0,
                                    const model::ModelConfig& config, std::span<const double> times) {
    config.validate();
    if (!std::isfinite(x0) || !std::isfinite(p0)) throw DomainError("mean_trajectory: X0, P0 must be finite");
    const auto q = quadratures(spec, times);
    const double scale = p0 / (config.mass * config.omega);
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = q.a[i] * x0 + q.b[i] * scale;
    return out;
}

std::size_t LangevinCoefficients::singular_count() const {
    return static_cast<std::size_t>(std::count(singular.begin(), singular.end(), std::uint8_t{1}));
}

LangevinCoefficients langevin_coefficients(const spectrum::SpectralDecomposition& spec,
                                           std::span<const double> times, double wronskian_floor) {
    const auto q = quadratures(spec, times);
    const std::size_t n = times.size();
    LangevinCoefficients out;
    out.times.assign(times.begin(), times.end());
    out.omega2.assign(n, nan);
    out.gamma.assign(n, nan);
    out.wronskian.resize(n);
    out.singular.assign(n, 0);
    out.residual_a.assign(n, nan);
    out.residual_b.assign(n, nan);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = q.a[i], b = q.b[i];
        const double ad = q.a_dot[i], bd = q.b_dot[i];
        const double add = q.a_ddot[i], bdd = q.b_ddot[i];
        const double w = a * bd - b * ad;
        out.wronskian[i] = w;
        if (!(std::abs(w) > wronskian_floor)) {
            out.singular[i] = 1;
            continue;
        }
        const double om2 = (ad * bdd - bd * add) / w;
        const double gam = (b * add - a * bdd) / w;
        out.omega2[i] = om2;
        out.gamma[i] = gam;
        out.residual_a[i] = add + gam * ad + om2 * a;
        out.residual_b[i] = bdd + gam * bd + om2 * b;
    }
    return out;
}

} // namespace qbm::dynamics
