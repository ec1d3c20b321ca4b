// resolvent.hpp — continuum limit: level shift, width, spectral density, and
// the survival amplitude as a Fourier integral of the spectral density
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/types.hpp"

namespace qbm::resolvent {

namespace detail {
struct ShiftTable;
}

struct ResolventOptions {
    // Tabulate Delta on Chebyshev panels (24 nodes each) for fast rho evaluation.
    bool tabulate{true};
    double table_tol{1e-11};   // relative to max |Delta| on the panel
    double pv_rel_tol{1e-12};  // direct principal-value evaluations
};

// Isolated pole of the resolvent outside the continuum.
struct BoundState {
    bool exists{false};
    double energy{0.0};
    double weight{0.0}; // 1 / (1 - Delta'(energy))
};

class ResolventModel {
public:
    ResolventModel(model::CouplingFunction coupling, double omega, ResolventOptions opts = {});

    const model::CouplingFunction& coupling() const noexcept { return coupling_; }
    double omega() const noexcept { return omega_; }

    // Delta(alpha) = PV int g^2(w) / (alpha - w) dw, evaluated directly.
    // Throws DomainError where g^2 jumps at alpha.
    double level_shift(double alpha) const;
    // Same function through the Chebyshev table (direct outside its range).
    double level_shift_fast(double alpha) const;
    // gamma(alpha) = 2 pi g^2(alpha)
    double width(double alpha) const;

    // rho(w) = g^2 / |w - Omega - Delta + i gamma / 2|^2; 0 for w <= 0.
    double spectral_density(double w) const;
    // (1 / 2 pi) gamma / ((w - Omega - Delta)^2 + gamma^2 / 4), same Delta.
    double spectral_density_lorentzian_form(double w) const;
    // R_+^{-1}(w) = w - Omega - Delta(w) + i gamma(w) / 2
    std::complex<double> inverse_resolvent(double w) const;

    double support_lo() const noexcept { return lo_; }
    // Finite end of the support used in integrals.
    double support_hi() const noexcept { return hi_; }
    // Omega + Delta(Omega) and the coupling kinks: panel edges for rho integrals.
    std::vector<double> breakpoints() const;

    // Pole below the continuum (strong coupling); exists == false when absent.
    BoundState bound_state() const;
    // All poles in increasing energy: the one above also appears when the
    // support ends at a finite edge where Delta grows past w - Omega.
    std::vector<BoundState> bound_states() const;

    // int rho + bound-state weights; equals 1 for a complete spectral measure.
    double normalization() const;
    double continuum_mass() const;

    // Largest deviation of the table from direct evaluations at its check points, leaving out
    // panels beside a jump of g^2 where rounding of alpha bounds any evaluation.
    double table_max_error() const;
    std::size_t table_panels() const;

private:
    BoundState pole(double e) const;

    model::CouplingFunction coupling_;
    double omega_;
    ResolventOptions opts_;
    double lo_{0.0};
    double hi_{0.0};
    std::shared_ptr<const detail::ShiftTable> table_;
};

struct ContinuumOptions {
    double rel_tol{1e-12};
    std::size_t max_panels{20'000'000};
    bool include_bound_state{true};
};

// A(t) = int rho(w) exp(-i w t) dw (+ bound-state term). Throws ResolutionError
// when t exceeds what the panel budget resolves.
AmplitudeSeries survival_amplitude_continuum(const ResolventModel& model, std::span<const double> times,
                                             const ContinuumOptions& opts = {});

// Same integral at a complex time; t = -i beta gives int rho exp(-beta w) dw.
std::complex<double> survival_amplitude_at(const ResolventModel& model, std::complex<double> t,
                                           const ContinuumOptions& opts = {});

struct TailFit {
    double exponent{0.0};   // p in |A| ~ t^-p
    double prefactor{0.0};
    double r_squared{0.0};
    std::size_t points{0};
    bool accepted{false};
    std::string reason;
};

inline constexpr double tail_fit_min_r_squared = 0.99;

// Least squares of ln|A| against ln t on samples inside [t1, t2]; rejected when R^2 < 0.99.
TailFit khalfin_tail_fit(const AmplitudeSeries& series, double t1, double t2);

// t1: first sample after which exp(-gamma t / 2) stays below |A| / dominance;
// t2: last sample. Throws DomainError when the exponential never drops below.
std::pair<double, double> default_tail_window(const AmplitudeSeries& series, double gamma,
                                              double dominance = 100.0);

} // namespace qbm::resolvent
