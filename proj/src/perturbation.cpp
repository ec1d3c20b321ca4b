// perturbation.cpp — delta Omega, gamma, Dyson-series rates, van Kampen, Breit-Wigner

#include "qbm/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qbm/error.hpp"
#include "qbm/quadrature.hpp"

namespace qbm::perturbation {

namespace {

constexpr double pi = std::numbers::pi;

// Sign change of f inside [lo, hi].
double bisect(const auto& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double upper_limit(const model::CouplingFunction& c) {
    return std::isfinite(c.support_hi()) ? c.support_hi() : c.effective_upper(1e-18);
}

} // namespace

double PerturbativeConstants::window_lo() const {
    return 4.0 * pi / eta;
}

double PerturbativeConstants::window_hi() const {
    return gamma > 0.0 ? 1.0 / gamma : std::numeric_limits<double>::infinity();
}

bool PerturbativeConstants::window_nonempty() const {
    return gamma < eta / (4.0 * pi);
}

double frequency_shift(const model::CouplingFunction& coupling, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("frequency_shift: Omega must be > 0");
    if (!coupling.continuous_at(omega))
        throw DomainError("frequency_shift: g^2 is discontinuous at Omega; the PV does not exist");

    const double lo = std::max(0.0, coupling.support_lo());
    const double hi = upper_limit(coupling);
    const auto kinks = coupling.kinks();
    quad::Options opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-300;

    if (omega <= lo || omega >= hi) {
        const auto r = quad::integrate([&](double w) { return coupling(w) / (omega - w); }, lo, hi, kinks, opts);
        return r.value;
    }
    // Subtraction on the finite truncated support with the analytic log term.
    const double g2 = coupling(omega);
    auto subtracted = [&](double w) { return w == omega ? 0.0 : (coupling(w) - g2) / (omega - w); };
    std::vector<double> cuts(kinks.begin(), kinks.end());
    cuts.push_back(omega);
    const auto r = quad::integrate(subtracted, lo, hi, cuts, opts);
    return r.value + g2 * std::log((omega - lo) / (hi - omega));
}

double discrete_frequency_shift(const model::BathSpec& bath, double omega) {
    double sum = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double d = omega - bath.omega()[k];
        if (std::abs(d) < 1e-12) continue;
        sum += bath.g()[k] * bath.g()[k] / d;
    }
    return sum;
}

DampingRate damping_rate(const model::CouplingFunction& coupling, double omega) {
    if (coupling.continuous_at(omega)) return {2.0 * pi * coupling(omega), false};
    return {2.0 * pi * std::max(coupling.left_limit(omega), coupling.right_limit(omega)), true};
}

double fwhm(const model::CouplingFunction& coupling) {
    if (coupling.family() == model::CouplingFamily::window) return coupling.support_hi() - coupling.support_lo();
    const double p = coupling.peak();
    const double half = 0.5 * coupling(p);
    if (!(half > 0.0)) throw DomainError("fwhm: g^2 vanishes identically");
    auto f = [&](double w) { return coupling(w) - half; };
    const double lo = bisect(f, std::max(0.0, coupling.support_lo()), p);
    const double hi = bisect(f, p, upper_limit(coupling));
    return hi - lo;
}

PerturbativeConstants constants(const model::CouplingFunction& coupling, double omega) {
    return {frequency_shift(coupling, omega), damping_rate(coupling, omega).value, fwhm(coupling)};
}

double delta_t(double alpha, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("delta_t: t must be > 0");
    const double x = alpha * t;
    if (std::abs(x) < 1e-8) return t / pi;
    const double s = std::sin(x);
    return s * s / (pi * alpha * alpha * t);
}

TransitionRates transition_rates(const model::ModelConfig& config, double t,
                                 const std::optional<PerturbativeConstants>& window) {
    config.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("transition_rates: t must be > 0");
    const std::size_t n = config.bath.size();
    const auto dim = static_cast<Eigen::Index>(n + 1);

    std::vector<double> freq(n + 1);
    std::vector<double> v0(n + 1, 0.0); // v_{0m} = g_m, v_{nm} = 0 for n, m >= 1
    freq[0] = config.omega;
    for (std::size_t k = 0; k < n; ++k) {
        freq[k + 1] = config.bath.omega()[k];
        v0[k + 1] = config.bath.g()[k];
    }

    TransitionRates out;
    out.time = t;
    out.rates = Matrix::Zero(dim, dim);
    for (Eigen::Index m = 1; m < dim; ++m) {
        const auto um = static_cast<std::size_t>(m);
        const double r = 2.0 * pi * v0[um] * v0[um] * delta_t(freq[0] - freq[um], t);
        out.rates(0, m) = r;
        out.rates(m, 0) = r;
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < dim; ++j)
            if (j != i) off += out.rates(i, j);
        out.rates(i, i) = -off;
    }
    out.probabilities = out.rates * t;
    out.probabilities.diagonal().array() += 1.0;

    if (window) {
        if (!(t > window->window_lo()))
            out.warnings.push_back("t = " + std::to_string(t) + " is below the validity window 4 pi / eta = " +
                                   std::to_string(window->window_lo()));
        if (!(t < window->window_hi()))
            out.warnings.push_back("t = " + std::to_string(t) + " is above the validity window 1 / gamma = " +
                                   std::to_string(window->window_hi()));
    }
    return out;
}

std::vector<double> van_kampen_trajectory(double gamma, double beta, double omega, double n0,
                                          std::span<const double> times) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("van_kampen_trajectory: gamma must be >= 0");
    if (!(beta > 0.0)) throw DomainError("van_kampen_trajectory: beta must be > 0");
    if (!(n0 >= 0.0)) throw DomainError("van_kampen_trajectory: N0 must be >= 0");
    require_time_grid(times);
    const double nbar = std::isinf(beta) ? 0.0 : model::bose_occupation(beta, omega);
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double relaxed = -std::expm1(-gamma * times[i]);
        out[i] = (1.0 - relaxed) * n0 + relaxed * nbar;
    }
    return out;
}

AmplitudeSeries breit_wigner_amplitude(double omega, double delta_omega, double gamma,
                                       std::span<const double> times) {
    if (!(gamma >= 0.0)) throw DomainError("breit_wigner_amplitude: gamma must be >= 0");
    require_time_grid(times);
    AmplitudeSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        out.values[i] = std::exp(Complex(-0.5 * gamma * t, -(omega + delta_omega) * t));
    }
    return out;
}

AmplitudeSeries first_order_transition_amplitude(double g, double omega_m, double omega,
                                                 std::span<const double> times) {
    require_time_grid(times);
    const double x = omega_m - omega;
    AmplitudeSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const Complex carrier = std::exp(Complex(0.0, -0.5 * (omega_m + omega) * t));
        // sin(x t / 2) / x -> t / 2 as x -> 0
        const double sinc = (std::abs(x * t) < 1e-8) ? 0.5 * t : std::sin(0.5 * x * t) / x;
        out.values[i] = g * carrier * Complex(0.0, -2.0) * sinc;
    }
    return out;
}

AmplitudeSeries first_order_transition_acceleration(double g, double omega_m, double omega,
                                                    std::span<const double> times) {
    auto out = first_order_transition_amplitude(g, omega_m, omega, times);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Complex drive = -g * (omega_m + omega) * std::exp(Complex(0.0, -omega_m * out.times[i]));
        out.values[i] = drive - omega * omega * out.values[i];
    }
    return out;
}

} // namespace qbm::perturbation
