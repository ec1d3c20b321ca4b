// model.hpp — system oscillator, continuum coupling families, bath
// discretization and the thermal initial state (hbar = k_B = 1)

#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace qbm::model {

enum class CouplingFamily { power_exponential, window, custom_table };

// Continuum coupling density g^2(w) = sum of g_n^2 per unit frequency.
// Zero for w <= 0 in every family.
class CouplingFunction {
public:
    // g^2 = strength * w^exponent * exp(-w / cutoff)
    static CouplingFunction power_exponential(double strength, double exponent, double cutoff);
    // g^2 = strength on [lo, hi], zero elsewhere
    static CouplingFunction window(double strength, double lo, double hi);
    // Piecewise-linear through (w, g^2) samples, zero outside the table.
    // low_exponent is the declared small-w power n.
    static CouplingFunction custom_table(std::vector<std::pair<double, double>> samples,
                                         double low_exponent = 1.0);

    double operator()(double omega) const;

    CouplingFamily family() const noexcept { return family_; }
    double strength() const noexcept { return strength_; }
    double exponent() const noexcept { return exponent_; }
    double cutoff() const noexcept { return cutoff_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

    // Closed support; upper end is +inf for the power-exponential family.
    double support_lo() const noexcept { return lo_; }
    double support_hi() const noexcept { return hi_; }

    // Where g^2 falls below rel * max g^2 beyond the maximum (finite).
    double effective_upper(double rel = 1e-18) const;

    // Location of the maximum of g^2.
    double peak() const;

    // Points inside the support where g^2 is not smooth (window edges, table knots).
    std::vector<double> kinks() const;

    bool continuous_at(double omega) const;
    double left_limit(double omega) const;
    double right_limit(double omega) const;

private:
    CouplingFamily family_{CouplingFamily::power_exponential};
    double strength_{0.0};
    double exponent_{1.0};
    double cutoff_{1.0};
    double lo_{0.0};
    double hi_{std::numeric_limits<double>::infinity()};
    std::vector<std::pair<double, double>> table_;
};

// Discrete bath modes; frequencies strictly increasing and positive.
class BathSpec {
public:
    BathSpec() = default;
    BathSpec(std::vector<double> omega, std::vector<double> g);

    const std::vector<double>& omega() const noexcept { return omega_; }
    const std::vector<double>& g() const noexcept { return g_; }
    std::vector<double> g_squared() const;
    std::size_t size() const noexcept { return omega_.size(); }

private:
    std::vector<double> omega_;
    std::vector<double> g_;
};

struct ModelConfig {
    double omega{1.0};  // system frequency
    double mass{1.0};
    double beta{1.0};   // inverse temperature; +inf is the zero-temperature bath
    double n0{0.0};     // initial system occupation
    BathSpec bath;

    // Throws ConfigError on any violated invariant.
    void validate() const;
};

struct ThermalState {
    std::vector<double> occupations;
};

enum class DiscretizationScheme { midpoint, gauss_bin };

// N bins uniform on the support clipped to [0, omega_max]; g_k^2 is the bin
// integral of g^2. midpoint puts w_k at the bin center, gauss_bin at the
// g^2-weighted centroid of the bin.
BathSpec discretize(const CouplingFunction& coupling, std::size_t n, double omega_max,
                    DiscretizationScheme scheme = DiscretizationScheme::midpoint);

// 10 * max(Omega, n * omega_c) for the power-exponential family, the support
// end (or last table knot) otherwise.
double default_omega_max(const CouplingFunction& coupling, double system_omega);

// 1 / (exp(beta w) - 1); requires beta * w > 0.
double bose_occupation(double beta, double omega);

ThermalState thermal_state(const ModelConfig& config);

} // namespace qbm::model
