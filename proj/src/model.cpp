// model.cpp — coupling families, discretization, thermal occupations

#include "qbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbm/error.hpp"
#include "qbm/quadrature.hpp"

namespace qbm::model {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool finite_positive(double x) {
    return std::isfinite(x) && x > 0.0;
}

double table_value(const std::vector<std::pair<double, double>>& t, double w) {
    if (t.empty() || w < t.front().first || w > t.back().first) return 0.0;
    auto it = std::upper_bound(t.begin(), t.end(), w,
                               [](double x, const std::pair<double, double>& s) { return x < s.first; });
    if (it == t.end()) return t.back().second;
    if (it == t.begin()) return t.front().second;
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (w - x0) / (x1 - x0);
}

} // namespace

CouplingFunction CouplingFunction::power_exponential(double strength, double exponent, double cutoff) {
    require(std::isfinite(strength) && strength >= 0.0, "coupling: strength must be finite and >= 0");
    require(finite_positive(exponent), "coupling: exponent n must be > 0");
    require(finite_positive(cutoff), "coupling: cutoff must be > 0");
    CouplingFunction c;
    c.family_ = CouplingFamily::power_exponential;
    c.strength_ = strength;
    c.exponent_ = exponent;
    c.cutoff_ = cutoff;
    c.lo_ = 0.0;
    c.hi_ = std::numeric_limits<double>::infinity();
    return c;
}

CouplingFunction CouplingFunction::window(double strength, double lo, double hi) {
    require(std::isfinite(strength) && strength >= 0.0, "coupling: strength must be finite and >= 0");
    require(std::isfinite(lo) && lo >= 0.0 && std::isfinite(hi) && hi > lo,
            "coupling: window needs 0 <= lo < hi");
    CouplingFunction c;
    c.family_ = CouplingFamily::window;
    c.strength_ = strength;
    c.exponent_ = 0.0;
    c.cutoff_ = hi;
    c.lo_ = lo;
    c.hi_ = hi;
    return c;
}

CouplingFunction CouplingFunction::custom_table(std::vector<std::pair<double, double>> samples,
                                                double low_exponent) {
    require(samples.size() >= 2, "coupling: table needs at least two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require(std::isfinite(samples[i].first) && samples[i].first >= 0.0,
                "coupling: table frequencies must be finite and >= 0");
        require(std::isfinite(samples[i].second) && samples[i].second >= 0.0,
                "coupling: table values must be finite and >= 0");
        if (i > 0)
            require(samples[i].first > samples[i - 1].first,
                    "coupling: table frequencies must be strictly increasing");
    }
    require(finite_positive(low_exponent), "coupling: exponent n must be > 0");
    CouplingFunction c;
    c.family_ = CouplingFamily::custom_table;
    c.strength_ = 1.0;
    c.exponent_ = low_exponent;
    c.cutoff_ = samples.back().first;
    c.lo_ = samples.front().first;
    c.hi_ = samples.back().first;
    c.table_ = std::move(samples);
    return c;
}

double CouplingFunction::operator()(double w) const {
    if (!(w > 0.0)) return 0.0;
    switch (family_) {
    case CouplingFamily::power_exponential:
        if (strength_ == 0.0) return 0.0;
        return strength_ * std::pow(w, exponent_) * std::exp(-w / cutoff_);
    case CouplingFamily::window:
        return (w >= lo_ && w <= hi_) ? strength_ : 0.0;
    case CouplingFamily::custom_table:
        return table_value(table_, w);
    }
    return 0.0;
}

double CouplingFunction::peak() const {
    switch (family_) {
    case CouplingFamily::power_exponential:
        return exponent_ * cutoff_;
    case CouplingFamily::window:
        return 0.5 * (lo_ + hi_);
    case CouplingFamily::custom_table: {
        auto it = std::max_element(table_.begin(), table_.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
        return it->first;
    }
    }
    return 0.0;
}

double CouplingFunction::effective_upper(double rel) const {
    if (family_ != CouplingFamily::power_exponential) return hi_;
    // g^2(w) / g^2(peak) = (w/p)^n exp(-(w - p)/c); walk out until below rel.
    const double p = peak();
    const double log_rel = std::log(rel);
    auto log_ratio = [&](double w) { return exponent_ * std::log(w / p) - (w - p) / cutoff_; };
    double w = std::max(p, cutoff_);
    while (log_ratio(w) > log_rel) w *= 1.25;
    return w;
}

std::vector<double> CouplingFunction::kinks() const {
    std::vector<double> out;
    if (family_ == CouplingFamily::window) {
        out = {lo_, hi_};
    } else if (family_ == CouplingFamily::custom_table) {
        for (const auto& s : table_) out.push_back(s.first);
    }
    return out;
}

double CouplingFunction::left_limit(double w) const {
    if (family_ == CouplingFamily::window) return (w > lo_ && w <= hi_) ? strength_ : 0.0;
    if (family_ == CouplingFamily::custom_table && w == lo_) return 0.0;
    return (*this)(w);
}

double CouplingFunction::right_limit(double w) const {
    if (family_ == CouplingFamily::window) return (w >= lo_ && w < hi_) ? strength_ : 0.0;
    if (family_ == CouplingFamily::custom_table && w == hi_) return 0.0;
    return (*this)(w);
}

bool CouplingFunction::continuous_at(double w) const {
    return left_limit(w) == right_limit(w);
}

BathSpec::BathSpec(std::vector<double> omega, std::vector<double> g) : omega_(std::move(omega)), g_(std::move(g)) {
    require(!omega_.empty(), "bath: need at least one mode");
    require(omega_.size() == g_.size(), "bath: omega and g differ in length");
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        require(finite_positive(omega_[k]), "bath: frequencies must be finite and > 0");
        require(std::isfinite(g_[k]) && g_[k] >= 0.0, "bath: couplings must be finite and >= 0");
        if (k > 0) require(omega_[k] > omega_[k - 1], "bath: frequencies must be strictly increasing");
    }
}

std::vector<double> BathSpec::g_squared() const {
    std::vector<double> out(g_.size());
    std::transform(g_.begin(), g_.end(), out.begin(), [](double x) { return x * x; });
    return out;
}

void ModelConfig::validate() const {
    require(finite_positive(omega), "config: system frequency must be finite and > 0");
    require(finite_positive(mass), "config: mass must be finite and > 0");
    require(beta > 0.0 && !std::isnan(beta), "config: beta must be > 0");
    require(std::isfinite(n0) && n0 >= 0.0, "config: initial occupation must be finite and >= 0");
    require(bath.size() >= 1, "config: bath has no modes");
}

BathSpec discretize(const CouplingFunction& coupling, std::size_t n, double omega_max,
                    DiscretizationScheme scheme) {
    require(n >= 1, "discretize: N must be >= 1");
    require(finite_positive(omega_max), "discretize: omega_max must be finite and > 0");
    const double lo = std::max(0.0, coupling.support_lo());
    const double hi = std::min(omega_max, coupling.support_hi());
    require(hi > lo, "discretize: omega_max lies below the coupling support");

    const double width = (hi - lo) / static_cast<double>(n);
    std::vector<double> omega(n);
    std::vector<double> g(n);
    const auto kinks = coupling.kinks();
    quad::Options opts;
    opts.rel_tol = 1e-13;
    opts.abs_tol = 1e-300;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = (k + 1 == n) ? hi : lo + width * static_cast<double>(k + 1);
        const auto mass = quad::integrate([&](double w) { return coupling(w); }, a, b, kinks, opts);
        const double g2 = std::max(0.0, mass.value);
        double center = 0.5 * (a + b);
        if (scheme == DiscretizationScheme::gauss_bin && g2 > 0.0) {
            const auto first = quad::integrate([&](double w) { return w * coupling(w); }, a, b, kinks, opts);
            center = std::clamp(first.value / g2, a, b);
            if (!(center > a)) center = 0.5 * (a + b);
        }
        omega[k] = center;
        g[k] = std::sqrt(g2);
    }
    return BathSpec(std::move(omega), std::move(g));
}

double default_omega_max(const CouplingFunction& coupling, double system_omega) {
    if (coupling.family() == CouplingFamily::power_exponential)
        return 10.0 * std::max(system_omega, coupling.exponent() * coupling.cutoff());
    return coupling.support_hi();
}

double bose_occupation(double beta, double omega) {
    const double x = beta * omega;
    if (std::isnan(x) || !(x > 0.0)) throw DomainError("bose_occupation: beta * omega must be > 0");
    return 1.0 / std::expm1(x);
}

ThermalState thermal_state(const ModelConfig& config) {
    config.validate();
    ThermalState state;
    state.occupations.reserve(config.bath.size());
    for (double w : config.bath.omega()) state.occupations.push_back(bose_occupation(config.beta, w));
    return state;
}

} // namespace qbm::model
