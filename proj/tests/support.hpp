// support.hpp — shared fixtures and independent numerical oracles for the tests
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "qbm/model.hpp"

namespace qbm::test {

inline constexpr double pi = std::numbers::pi;

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Omega = 1, one mode at 1 with g = 0.1.
inline model::ModelConfig resonant(double beta = std::numeric_limits<double>::infinity()) {
    model::ModelConfig c;
    c.omega = 1.0;
    c.beta = beta;
    c.bath = model::BathSpec({1.0}, {0.1});
    return c;
}

inline model::ModelConfig decoupled(std::vector<double> w) {
    model::ModelConfig c;
    c.omega = 1.0;
    c.bath = model::BathSpec(w, std::vector<double>(w.size(), 0.0));
    return c;
}

// g^2 = lambda w exp(-w) with 2 pi g^2(1) = gamma.
inline double lambda_for_gamma(double gamma) {
    return gamma / (2.0 * pi * std::exp(-1.0));
}

inline model::CouplingFunction weak_coupling(double gamma = 0.01) {
    return model::CouplingFunction::power_exponential(lambda_for_gamma(gamma), 1.0, 1.0);
}

inline model::ModelConfig weak_model(std::size_t n, double gamma = 0.01, double beta = 1.0, double n0 = 1.0) {
    model::ModelConfig c;
    c.omega = 1.0;
    c.beta = beta;
    c.n0 = n0;
    c.bath = model::discretize(weak_coupling(gamma), n, 10.0);
    return c;
}

// Random bath: distinct sorted frequencies in (0.05, 3), couplings in [0.005, 0.3].
inline model::ModelConfig random_model(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> freq(0.05, 3.0);
    std::uniform_real_distribution<double> coup(0.005, 0.3);
    std::uniform_real_distribution<double> sys(0.2, 2.5);
    std::vector<double> w(n);
    for (auto& x : w) x = freq(rng);
    std::sort(w.begin(), w.end());
    for (std::size_t k = 1; k < n; ++k)
        if (w[k] <= w[k - 1]) w[k] = std::nextafter(w[k - 1], 10.0) + 1e-9;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = coup(rng);
    model::ModelConfig c;
    c.omega = sys(rng);
    c.bath = model::BathSpec(std::move(w), std::move(g));
    return c;
}

// Composite Simpson rule on a uniform grid; an oracle independent of the library quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) s += f(a + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Ordinary least-squares slope and intercept of y against x.
inline std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

} // namespace qbm::test
