// resolvent.cpp — Delta, gamma, rho, Fourier survival amplitude, tail fits

#include "qbm/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qbm/error.hpp"

namespace qbm::resolvent {

namespace detail {

inline constexpr int table_nodes = 24;

struct ShiftPanel {
    double lo{0.0};
    double hi{0.0};
    std::array<double, table_nodes> values{};
};

struct Panel {
    double lo;
    double hi;
};

struct ShiftTable {
    std::vector<ShiftPanel> panels;
    double max_error{0.0};

    std::optional<double> eval(double x) const;
};

namespace {

struct NodeSet {
    std::array<double, table_nodes> x{}; // on [-1, 1]
    std::array<double, table_nodes> w{}; // barycentric weights
};

const NodeSet& nodes() {
    static const NodeSet set = [] {
        NodeSet s;
        for (int j = 0; j < table_nodes; ++j) {
            const double theta = (2.0 * j + 1.0) * std::numbers::pi / (2.0 * table_nodes);
            s.x[static_cast<std::size_t>(j)] = std::cos(theta);
            s.w[static_cast<std::size_t>(j)] = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin(theta);
        }
        return s;
    }();
    return set;
}

double node_position(const ShiftPanel& p, std::size_t j) {
    return 0.5 * (p.lo + p.hi) + 0.5 * (p.hi - p.lo) * nodes().x[j];
}

double interpolate(const ShiftPanel& p, double x) {
    const auto& ns = nodes();
    const double u = (2.0 * x - (p.lo + p.hi)) / (p.hi - p.lo);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < table_nodes; ++j) {
        const double d = u - ns.x[j];
        if (d == 0.0) return p.values[j];
        const double c = ns.w[j] / d;
        num += c * p.values[j];
        den += c;
    }
    return num / den;
}

} // namespace

std::optional<double> ShiftTable::eval(double x) const {
    auto it = std::upper_bound(panels.begin(), panels.end(), x,
                               [](double v, const ShiftPanel& p) { return v < p.lo; });
    if (it == panels.begin()) return std::nullopt;
    --it;
    if (!(x < it->hi)) return std::nullopt;
    return interpolate(*it, x);
}

} // namespace detail

namespace {

constexpr double pi = std::numbers::pi;

// Panels on [s, e], graded geometrically toward singular ends down to 2^-30 of the length.
std::vector<detail::Panel> graded(double s, double e, bool sing_lo, bool sing_hi) {
    std::vector<detail::Panel> out;
    if (sing_lo && sing_hi) {
        const double m = 0.5 * (s + e);
        out = graded(s, m, true, false);
        const auto right = graded(m, e, false, true);
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }
    constexpr int levels = 30;
    const double len = e - s;
    if (sing_lo) {
        for (int k = levels; k >= 1; --k)
            out.push_back({s + std::ldexp(len, -k), k == 1 ? e : s + std::ldexp(len, -(k - 1))});
    } else if (sing_hi) {
        for (int k = 1; k <= levels; ++k)
            out.push_back({k == 1 ? s : e - std::ldexp(len, -(k - 1)), e - std::ldexp(len, -k)});
    } else {
        out.push_back({s, e});
    }
    return out;
}

} // namespace

ResolventModel::ResolventModel(model::CouplingFunction coupling, double omega, ResolventOptions opts)
    : coupling_(std::move(coupling)), omega_(omega), opts_(opts) {
    if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw ConfigError("resolvent: Omega must be finite and > 0");
    lo_ = std::max(0.0, coupling_.support_lo());
    hi_ = std::isfinite(coupling_.support_hi()) ? coupling_.support_hi() : coupling_.effective_upper(1e-18);
    if (!opts_.tabulate) return;

    // Segment ends where Delta is not analytic: w = 0 and the kinks of g^2.
    std::vector<double> cuts{lo_};
    for (double k : coupling_.kinks())
        if (k > lo_ && k < hi_) cuts.push_back(k);
    cuts.push_back(hi_);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto kinks = coupling_.kinks();
    auto is_kink = [&](double x) { return std::find(kinks.begin(), kinks.end(), x) != kinks.end(); };

    std::vector<detail::Panel> initial;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const bool sl = (cuts[i] == 0.0) || is_kink(cuts[i]);
        const bool sh = is_kink(cuts[i + 1]);
        const auto part = graded(cuts[i], cuts[i + 1], sl, sh);
        initial.insert(initial.end(), part.begin(), part.end());
    }

    const double tol = opts_.table_tol;
    std::vector<std::vector<detail::ShiftPanel>> refined(initial.size());
    std::vector<double> errors(initial.size(), 0.0);
    const auto count = static_cast<std::ptrdiff_t>(initial.size());
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            std::vector<detail::Panel> stack{initial[static_cast<std::size_t>(i)]};
            std::vector<int> depth{0};
            while (!stack.empty()) {
                const auto p = stack.back();
                const int d = depth.back();
                stack.pop_back();
                depth.pop_back();
                detail::ShiftPanel sp{p.lo, p.hi, {}};
                double scale = 0.0;
                for (std::size_t j = 0; j < detail::table_nodes; ++j) {
                    sp.values[j] = level_shift(detail::node_position(sp, j));
                    scale = std::max(scale, std::abs(sp.values[j]));
                }
                double err = 0.0;
                for (double frac : {0.13, 0.51, 0.87}) {
                    const double x = p.lo + frac * (p.hi - p.lo);
                    err = std::max(err, std::abs(detail::interpolate(sp, x) - level_shift(x)));
                }
                const bool narrow = (p.hi - p.lo) <= 1e-13 * std::max(1.0, std::abs(p.hi));
                // Next to a jump of g^2, Delta varies so fast that rounding x alone moves it by
                // eps |x| |Delta'|; no interpolant can be checked below that floor.
                const auto [vmin, vmax] = std::minmax_element(sp.values.begin(), sp.values.end());
                const double slope = (*vmax - *vmin) / (p.hi - p.lo);
                const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(p.hi) * slope;
                const bool met = err <= tol * std::max(scale, 1e-300);
                if (met || err <= floor || d >= 40 || narrow) {
                    auto& out = refined[static_cast<std::size_t>(i)];
                    if (met || !(err <= floor))
                        errors[static_cast<std::size_t>(i)] = std::max(errors[static_cast<std::size_t>(i)], err);
                    // Left-to-right order: the right half is pushed first, so panels pop in order.
                    out.push_back(sp);
                    continue;
                }
                const double mid = 0.5 * (p.lo + p.hi);
                stack.push_back({mid, p.hi});
                depth.push_back(d + 1);
                stack.push_back({p.lo, mid});
                depth.push_back(d + 1);
            }
        } catch (const std::exception& e) {
#pragma omp critical(qbm_resolvent_table)
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw NumericalError("resolvent: building the Delta table failed: " + failure);

    auto table = std::make_shared<detail::ShiftTable>();
    for (std::size_t i = 0; i < refined.size(); ++i) {
        table->panels.insert(table->panels.end(), refined[i].begin(), refined[i].end());
        table->max_error = std::max(table->max_error, errors[i]);
    }
    table_ = std::move(table);
}

double ResolventModel::level_shift(double alpha) const {
    if (!std::isfinite(alpha)) throw DomainError("level_shift: alpha must be finite");
    const auto kinks = coupling_.kinks();
    quad::Options opts;
    opts.rel_tol = opts_.pv_rel_tol;
    opts.abs_tol = 1e-300;
    opts.map_scale = coupling_.family() == model::CouplingFamily::power_exponential ? coupling_.cutoff() : 1.0;
    auto g2 = [this](double w) { return coupling_(w); };
    const double top = coupling_.support_hi();

    if (alpha <= lo_ || alpha >= top) {
        if ((alpha == lo_ && lo_ > 0.0 && coupling_.right_limit(lo_) > 0.0) ||
            (alpha == top && coupling_.left_limit(top) > 0.0))
            throw DomainError("level_shift: g^2 jumps at alpha; Delta diverges there");
        const auto r = quad::integrate([&](double w) { return g2(w) / (alpha - w); }, lo_, top, kinks, opts);
        if (!r.converged) throw NumericalError("level_shift: quadrature did not converge");
        return r.value;
    }
    if (!coupling_.continuous_at(alpha))
        throw DomainError("level_shift: g^2 is discontinuous at alpha; the PV does not exist");
    const auto r = quad::principal_value(g2, alpha, lo_, top, kinks, opts);
    if (!r.converged) throw NumericalError("level_shift: PV quadrature did not converge");
    return r.value;
}

double ResolventModel::level_shift_fast(double alpha) const {
    if (table_) {
        if (auto v = table_->eval(alpha)) return *v;
    }
    return level_shift(alpha);
}

double ResolventModel::width(double alpha) const {
    return 2.0 * pi * coupling_(alpha);
}

double ResolventModel::spectral_density(double w) const {
    if (!(w > 0.0)) return 0.0;
    const double g2 = coupling_(w);
    if (g2 == 0.0) return 0.0;
    const double d = w - omega_ - level_shift_fast(w);
    return g2 / (d * d + pi * pi * g2 * g2);
}

double ResolventModel::spectral_density_lorentzian_form(double w) const {
    if (!(w > 0.0)) return 0.0;
    const double gam = width(w);
    if (gam == 0.0) return 0.0;
    const double d = w - omega_ - level_shift_fast(w);
    return gam / (2.0 * pi * (d * d + 0.25 * gam * gam));
}

std::complex<double> ResolventModel::inverse_resolvent(double w) const {
    return {w - omega_ - level_shift_fast(w), 0.5 * width(w)};
}

std::vector<double> ResolventModel::breakpoints() const {
    std::vector<double> out = coupling_.kinks();
    if (coupling_.continuous_at(omega_)) {
        const double peak = omega_ + level_shift_fast(omega_);
        if (peak > lo_ && peak < hi_) out.push_back(peak);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Bisection for a sign change of f on [a, b] with f(a) < 0 < f(b).
template <class F>
double bisect(F&& f, double a, double b) {
    for (int i = 0; i < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
        const double m = 0.5 * (a + b);
        (f(m) > 0.0 ? b : a) = m;
    }
    return 0.5 * (a + b);
}

} // namespace

BoundState ResolventModel::pole(double e) const {
    // Residue 1 / (1 - Delta'(e)) with Delta'(e) = -int g^2 / (e - w)^2.
    quad::Options opts;
    opts.rel_tol = 1e-12;
    opts.map_scale = coupling_.family() == model::CouplingFamily::power_exponential ? coupling_.cutoff() : 1.0;
    const auto dd = quad::integrate(
        [&](double w) {
            const double r = e - w;
            return coupling_(w) / (r * r);
        },
        lo_, coupling_.support_hi(), coupling_.kinks(), opts);
    return {true, e, 1.0 / (1.0 + dd.value)};
}

BoundState ResolventModel::bound_state() const {
    // F(w) = w - Omega - Delta(w) is strictly increasing outside the continuum.
    auto f = [this](double w) { return w - omega_ - level_shift(w); };
    double upper = lo_;
    if (lo_ > 0.0 && coupling_.right_limit(lo_) > 0.0) {
        // Delta diverges logarithmically at a jump; step just below the edge.
        const double span = hi_ - lo_;
        double d = 1e-6 * span;
        upper = lo_ - d;
        while (!(f(upper) > 0.0) && d > 1e-15 * std::max(1.0, lo_)) {
            d *= 1e-2;
            upper = lo_ - d;
        }
    }
    if (!(f(upper) > 0.0)) return {};

    double a = upper - std::max(1.0, omega_);
    double step = upper - a;
    int guard = 0;
    while (f(a) > 0.0 && guard++ < 200) {
        step *= 2.0;
        a = upper - step;
    }
    return pole(bisect(f, a, upper));
}

std::vector<BoundState> ResolventModel::bound_states() const {
    std::vector<BoundState> out;
    if (const auto b = bound_state(); b.exists) out.push_back(b);

    const double top = coupling_.support_hi();
    if (!std::isfinite(top)) return out;
    auto f = [this](double w) { return w - omega_ - level_shift(w); };
    double start = top;
    const double span = top - lo_;
    if (coupling_.left_limit(top) > 0.0) {
        double d = 1e-6 * span;
        start = top + d;
        while (!(f(start) < 0.0) && d > 1e-15 * std::max(1.0, top)) {
            d *= 1e-2;
            start = top + d;
        }
    }
    if (!(f(start) < 0.0)) return out;
    double step = std::max({1.0, omega_, span});
    double b = start + step;
    int guard = 0;
    while (f(b) < 0.0 && guard++ < 200) {
        step *= 2.0;
        b = start + step;
    }
    out.push_back(pole(bisect(f, start, b)));
    return out;
}

double ResolventModel::continuum_mass() const {
    quad::Options opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-300;
    const auto bp = breakpoints();
    const auto r = quad::integrate([this](double w) { return spectral_density(w); }, lo_, hi_, bp, opts);
    if (!r.converged) throw NumericalError("continuum_mass: quadrature did not converge");
    return r.value;
}

double ResolventModel::normalization() const {
    double total = continuum_mass();
    for (const auto& b : bound_states()) total += b.weight;
    return total;
}

double ResolventModel::table_max_error() const {
    return table_ ? table_->max_error : 0.0;
}

std::size_t ResolventModel::table_panels() const {
    return table_ ? table_->panels.size() : 0;
}

std::complex<double> survival_amplitude_at(const ResolventModel& model, std::complex<double> t,
                                           const ContinuumOptions& opts) {
    quad::FourierOptions fo;
    fo.rel_tol = opts.rel_tol;
    fo.max_panels = opts.max_panels;
    fo.breakpoints = model.breakpoints();
    fo.threshold_at_lower = (model.support_lo() == 0.0);
    const auto r = quad::fourier_integral([&model](double w) { return model.spectral_density(w); }, t,
                                          model.support_lo(), model.support_hi(), fo);
    if (!r.converged) throw NumericalError("survival_amplitude_continuum: panel quadrature did not converge");
    std::complex<double> value = r.value;
    if (opts.include_bound_state) {
        for (const auto& b : model.bound_states())
            value += b.weight * std::exp(std::complex<double>(0.0, -b.energy) * t);
    }
    return value;
}

AmplitudeSeries survival_amplitude_continuum(const ResolventModel& model, std::span<const double> times,
                                             const ContinuumOptions& opts) {
    require_time_grid(times);
    AmplitudeSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.values[i] = survival_amplitude_at(model, times[i], opts);
    return out;
}

TailFit khalfin_tail_fit(const AmplitudeSeries& series, double t1, double t2) {
    if (!(t1 > 0.0) || !(t2 > t1)) throw DomainError("khalfin_tail_fit: need 0 < t1 < t2");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        const double a = std::abs(series.values[i]);
        if (t >= t1 && t <= t2 && a > 0.0) {
            x.push_back(t);
            y.push_back(a);
        }
    }
    TailFit fit;
    fit.points = x.size();
    if (x.size() < 4) {
        fit.reason = "fewer than 4 usable samples in the window";
        return fit;
    }
    const auto pl = quad::power_law_fit(x, y);
    fit.exponent = -pl.slope;
    fit.prefactor = std::exp(pl.intercept);
    fit.r_squared = pl.r_squared;
    fit.accepted = pl.r_squared >= tail_fit_min_r_squared;
    if (!fit.accepted) fit.reason = "R^2 below 0.99: window is not in a power-law regime";
    return fit;
}

std::pair<double, double> default_tail_window(const AmplitudeSeries& series, double gamma, double dominance) {
    if (series.size() < 4) throw DomainError("default_tail_window: need at least 4 samples");
    std::size_t first = series.size();
    for (std::size_t i = series.size(); i-- > 0;) {
        const double bw = std::exp(-0.5 * gamma * series.times[i]);
        if (bw * dominance < std::abs(series.values[i]))
            first = i;
        else
            break;
    }
    if (first + 4 > series.size())
        throw DomainError("default_tail_window: the exponential never falls clearly below the tail");
    return {series.times[first], series.times.back()};
}

} // namespace qbm::resolvent
