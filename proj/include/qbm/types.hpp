// types.hpp — small value types shared across modules

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace qbm {

using Complex = std::complex<double>;

// Row-major so that one eigenvector's bath components are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Complex time series: survival / transition amplitudes and friends.
struct AmplitudeSeries {
    std::vector<double> times;
    std::vector<Complex> values;

    std::size_t size() const noexcept { return times.size(); }
    std::vector<double> magnitudes() const;
};

// Time grids are always caller supplied; these helpers only build them.
std::vector<double> linear_grid(double t_min, double t_max, std::size_t samples);
std::vector<double> log_grid(double t_min, double t_max, std::size_t samples);

// Throws DomainError unless times are finite, >= 0 and strictly increasing.
void require_time_grid(std::span<const double> times);

} // namespace qbm
