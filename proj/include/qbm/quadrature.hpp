// quadrature.hpp — adaptive Gauss-Kronrod, principal values, oscillatory
// Fourier integrals and log-log regression

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qbm::quad {

using RealFn = std::function<double(double)>;

struct Options {
    double rel_tol{1e-10};
    double abs_tol{0.0};
    std::size_t max_panels{10000};
    // Infinite upper limits are mapped by w = a + map_scale * u / (1 - u).
    double map_scale{1.0};
};

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    std::size_t panels_used{0};
    bool converged{false};
};

struct ComplexQuadratureResult {
    std::complex<double> value{};
    double error_estimate{0.0};
    std::size_t panels_used{0};
    bool converged{false};
};

// Global adaptive 7/15 Gauss-Kronrod on [a, b]; b may be +infinity.
// Budget exhaustion returns converged = false with the best estimate.
QuadratureResult integrate(const RealFn& f, double a, double b, const Options& opts = {});

// Same, with interior points where f is known to vary sharply or lose smoothness.
QuadratureResult integrate(const RealFn& f, double a, double b,
                           std::span<const double> breakpoints, const Options& opts = {});

// PV of  int_a^b f(x) / (pole - x) dx  by singularity subtraction:
//   int [f(x) - f(pole)] / (pole - x) dx + f(pole) ln((pole - a) / (b - pole)).
// Requires a < pole < b (b may be +infinity) and f differentiable at the pole.
QuadratureResult principal_value(const RealFn& f, double pole, double a, double b,
                                 const Options& opts = {});
QuadratureResult principal_value(const RealFn& f, double pole, double a, double b,
                                 std::span<const double> breakpoints, const Options& opts = {});

// Independent route to the same PV: symmetric excision of (pole - eps, pole + eps)
// followed by Richardson extrapolation in eps (odd powers only for smooth f).
QuadratureResult principal_value_excision(const RealFn& f, double pole, double a, double b,
                                          const Options& opts = {});

struct FourierOptions {
    double rel_tol{1e-12};
    double abs_tol{0.0};
    std::size_t max_panels{20'000'000};
    // Interior points (e.g. a resonance) that must be panel edges.
    std::vector<double> breakpoints;
    // f behaves like (w - a)^n near the lower limit; grade the first panel
    // geometrically in u = (w - a) * max(|Re t|, 1).
    bool threshold_at_lower{false};
};

// int_a^b f(w) exp(-i w t) dw for complex t. Real t gives the Fourier transform,
// t = -i beta gives the Laplace transform through the very same panel sum.
// Panels have width <= pi / (4 max(|Re t|, 1)); throws ResolutionError when the
// panel count would exceed the budget.
ComplexQuadratureResult fourier_integral(const RealFn& f, std::complex<double> t, double a,
                                         double b, const FourierOptions& opts = {});

// Largest |Re t| resolvable on [a, b] with the given panel budget.
double max_resolvable_time(double a, double b, std::size_t max_panels);

struct PowerLawFit {
    double slope{0.0};
    double intercept{0.0};
    double r_squared{0.0};
    std::size_t points{0};
};

// Least squares of ln y against ln x. Needs >= 4 points, all x, y > 0.
PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y);

// Fixed-shape pairwise summation; the tree depends only on the length.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

} // namespace qbm::quad
