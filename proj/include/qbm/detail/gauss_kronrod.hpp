// gauss_kronrod.hpp — 15-point Kronrod rule with embedded 7-point Gauss rule

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace qbm::detail {

// Abscissae and weights from QUADPACK qk15.
inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> gk15_kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> g7_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct RuleEstimate {
    T kronrod{};
    T gauss{};
    double abs_integral{0.0}; // int |f|
    double error{0.0};        // QUADPACK-style error estimate
};

template <typename T>
inline double magnitude(const T& v) {
    return std::abs(v);
}

template <typename T, typename F>
RuleEstimate<T> gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<T, 7> lower{};
    std::array<T, 7> upper{};
    const T fc = f(center);
    T resk = fc * gk15_kronrod_weights[7];
    T resg = fc * g7_weights[3];
    double resabs = magnitude(fc) * gk15_kronrod_weights[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15_nodes[j];
        lower[j] = f(center - dx);
        upper[j] = f(center + dx);
        resk += gk15_kronrod_weights[j] * (lower[j] + upper[j]);
        resabs += gk15_kronrod_weights[j] * (magnitude(lower[j]) + magnitude(upper[j]));
        if (j % 2 == 1) resg += g7_weights[j / 2] * (lower[j] + upper[j]);
    }
    const T mean = resk * 0.5;
    double resasc = gk15_kronrod_weights[7] * magnitude(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += gk15_kronrod_weights[j] * (magnitude(lower[j] - mean) + magnitude(upper[j] - mean));

    RuleEstimate<T> out;
    out.kronrod = resk * half;
    out.gauss = resg * half;
    out.abs_integral = resabs * abs_half;
    resasc *= abs_half;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    double err = magnitude(out.kronrod - out.gauss);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (out.abs_integral > uflow / (50.0 * eps)) err = std::max(50.0 * eps * out.abs_integral, err);
    out.error = err;
    return out;
}

} // namespace qbm::detail
