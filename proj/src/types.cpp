// types.cpp — time-grid helpers and series accessors

#include "qbm/types.hpp"

#include <cmath>

#include "qbm/error.hpp"

namespace qbm {

std::vector<double> AmplitudeSeries::magnitudes() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
    return out;
}

std::vector<double> linear_grid(double t_min, double t_max, std::size_t samples) {
    if (samples == 0 || !std::isfinite(t_min) || !std::isfinite(t_max) || t_min < 0.0 ||
        (samples > 1 && !(t_max > t_min)))
        throw DomainError("linear_grid: need 0 <= t_min < t_max and samples >= 1");
    std::vector<double> out(samples);
    if (samples == 1) {
        out[0] = t_min;
        return out;
    }
    const double step = (t_max - t_min) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) out[i] = t_min + step * static_cast<double>(i);
    out.back() = t_max;
    return out;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t samples) {
    if (samples < 2 || !(t_min > 0.0) || !std::isfinite(t_max) || !(t_max > t_min))
        throw DomainError("log_grid: need 0 < t_min < t_max and samples >= 2");
    std::vector<double> out(samples);
    const double l0 = std::log(t_min);
    const double step = (std::log(t_max) - l0) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) out[i] = std::exp(l0 + step * static_cast<double>(i));
    out.front() = t_min;
    out.back() = t_max;
    return out;
}

void require_time_grid(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw DomainError("time grid: samples must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw DomainError("time grid: samples must be strictly increasing");
    }
}

} // namespace qbm
