// kernels.cpp — serial reference loops and their OpenMP counterparts

#include "qbm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbm/detail/gauss_kronrod.hpp"
#include "qbm/error.hpp"

namespace qbm::kernels {

namespace {

struct MomentsAt {
    double c0{0.0}, s0{0.0}, c1{0.0}, s1{0.0}, c2{0.0}, s2{0.0};
};

MomentsAt moments_at(std::span<const double> w, std::span<const double> alpha, double t) {
    MomentsAt m;
    for (std::size_t v = 0; v < w.size(); ++v) {
        const double phase = alpha[v] * t;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        const double wa = w[v] * alpha[v];
        const double waa = wa * alpha[v];
        m.c0 += w[v] * c;
        m.s0 += w[v] * s;
        m.c1 += wa * c;
        m.s1 += wa * s;
        m.c2 += waa * c;
        m.s2 += waa * s;
    }
    return m;
}

SpectralMoments allocate_moments(std::size_t n) {
    SpectralMoments out;
    for (auto* v : {&out.c0, &out.s0, &out.c1, &out.s1, &out.c2, &out.s2}) v->assign(n, 0.0);
    return out;
}

void store(SpectralMoments& out, std::size_t i, const MomentsAt& m) {
    out.c0[i] = m.c0;
    out.s0[i] = m.s0;
    out.c1[i] = m.c1;
    out.s1[i] = m.s1;
    out.c2[i] = m.c2;
    out.s2[i] = m.s2;
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DomainError(std::string(what) + ": length mismatch");
}

double cosine_at(std::span<const double> coeffs, std::span<const double> freqs, double t) {
    double sum = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) sum += coeffs[m] * std::cos(freqs[m] * t);
    return sum;
}

// Accumulates the bath amplitudes for one time into (re, im) and reduces them.
void projection_at(std::span<const double> phi, std::span<const double> alphas,
                   const Matrix& overlaps, std::span<const double> occ, double t,
                   std::vector<double>& re, std::vector<double>& im, double& total,
                   double& weighted) {
    const auto n_bath = static_cast<std::size_t>(overlaps.cols());
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    for (std::size_t v = 0; v < phi.size(); ++v) {
        if (phi[v] == 0.0) continue;
        const double phase = alphas[v] * t;
        const double cr = phi[v] * std::cos(phase);
        const double ci = -phi[v] * std::sin(phase);
        const double* row = overlaps.data() + v * n_bath;
        for (std::size_t k = 0; k < n_bath; ++k) {
            re[k] += cr * row[k];
            im[k] += ci * row[k];
        }
    }
    total = 0.0;
    weighted = 0.0;
    for (std::size_t k = 0; k < n_bath; ++k) {
        const double p = re[k] * re[k] + im[k] * im[k];
        total += p;
        weighted += occ[k] * p;
    }
}

struct SecularEval {
    double value{0.0};
    double slope{0.0};
};

SecularEval secular_at(const SecularProblem& p, std::size_t anchor, double delta) {
    const double origin = p.poles[anchor];
    double sum = 0.0;
    double dsum = 0.0;
    for (std::size_t k = 0; k < p.poles.size(); ++k) {
        const double d = (origin - p.poles[k]) + delta;
        const double q = p.g2[k] / d;
        sum += q;
        dsum += q / d;
    }
    return {(origin - p.system_freq) + delta - sum, 1.0 + dsum};
}

} // namespace

SpectralMoments spectral_moments_serial(std::span<const double> weights, std::span<const double> alphas,
                                        std::span<const double> times) {
    require_same_length(weights.size(), alphas.size(), "spectral_moments");
    auto out = allocate_moments(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) store(out, i, moments_at(weights, alphas, times[i]));
    return out;
}

SpectralMoments spectral_moments_parallel(std::span<const double> weights,
                                          std::span<const double> alphas,
                                          std::span<const double> times) {
    require_same_length(weights.size(), alphas.size(), "spectral_moments");
    auto out = allocate_moments(times.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        store(out, idx, moments_at(weights, alphas, times[idx]));
    }
    return out;
}

std::vector<double> cosine_series_serial(std::span<const double> coeffs, std::span<const double> freqs,
                                         std::span<const double> times) {
    require_same_length(coeffs.size(), freqs.size(), "cosine_series");
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = cosine_at(coeffs, freqs, times[i]);
    return out;
}

std::vector<double> cosine_series_parallel(std::span<const double> coeffs,
                                           std::span<const double> freqs,
                                           std::span<const double> times) {
    require_same_length(coeffs.size(), freqs.size(), "cosine_series");
    std::vector<double> out(times.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = cosine_at(coeffs, freqs, times[idx]);
    }
    return out;
}

BathProjection bath_projection_serial(std::span<const double> phi, std::span<const double> alphas,
                                      const Matrix& overlaps, std::span<const double> occupations,
                                      std::span<const double> times) {
    require_same_length(phi.size(), static_cast<std::size_t>(overlaps.rows()), "bath_projection");
    require_same_length(occupations.size(), static_cast<std::size_t>(overlaps.cols()),
                        "bath_projection");
    BathProjection out{std::vector<double>(times.size()), std::vector<double>(times.size())};
    std::vector<double> re(static_cast<std::size_t>(overlaps.cols()));
    std::vector<double> im(re.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        projection_at(phi, alphas, overlaps, occupations, times[i], re, im, out.total[i],
                      out.weighted[i]);
    return out;
}

BathProjection bath_projection_parallel(std::span<const double> phi, std::span<const double> alphas,
                                        const Matrix& overlaps, std::span<const double> occupations,
                                        std::span<const double> times) {
    require_same_length(phi.size(), static_cast<std::size_t>(overlaps.rows()), "bath_projection");
    require_same_length(occupations.size(), static_cast<std::size_t>(overlaps.cols()),
                        "bath_projection");
    BathProjection out{std::vector<double>(times.size()), std::vector<double>(times.size())};
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel
    {
        std::vector<double> re(static_cast<std::size_t>(overlaps.cols()));
        std::vector<double> im(re.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            projection_at(phi, alphas, overlaps, occupations, times[idx], re, im, out.total[idx],
                          out.weighted[idx]);
        }
    }
    return out;
}

SecularRoot solve_secular_interval(const SecularProblem& p, std::size_t interval) {
    const std::size_t k_poles = p.poles.size();
    if (k_poles == 0) throw DomainError("secular: no coupled modes");
    if (interval > k_poles) throw DomainError("secular: interval index out of range");

    // Root at alpha = poles[anchor] + sign * u with u in (0, upper]; F(u) = sign * S
    // increases from -inf at u -> 0+.
    std::size_t anchor = 0;
    double sign = 1.0;
    double upper = 0.0;
    auto eval = [&](double u) {
        const auto e = secular_at(p, anchor, sign * u);
        return SecularEval{sign * e.value, e.slope};
    };

    if (interval == 0 || interval == k_poles) {
        anchor = (interval == 0) ? 0 : k_poles - 1;
        sign = (interval == 0) ? -1.0 : 1.0;
        upper = std::max(1.0, std::abs(p.poles[anchor] - p.system_freq));
        for (int grow = 0; eval(upper).value < 0.0; ++grow) {
            if (grow > 2000) throw NumericalError("secular: failed to bracket outer root");
            upper *= 2.0;
        }
    } else {
        const double half = 0.5 * (p.poles[interval] - p.poles[interval - 1]);
        if (secular_at(p, interval - 1, half).value >= 0.0) {
            anchor = interval - 1;
            sign = 1.0;
        } else {
            anchor = interval;
            sign = -1.0;
        }
        upper = half;
    }

    SecularRoot root;
    root.anchor = anchor;
    double lo = upper * 1e-100;
    double hi = upper;
    if (eval(lo).value >= 0.0) {
        // Coupling too weak to move the root off the pole in double precision.
        root.offset = sign * lo;
        return root;
    }
    const auto at_hi = eval(hi);
    if (at_hi.value == 0.0) {
        root.offset = sign * hi;
        return root;
    }

    int iterations = 0;
    // Bracketing phase; geometric steps while the bracket spans many decades.
    while (hi - lo > 1e-6 * hi) {
        const double mid = (hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        const double f = eval(mid).value;
        ++iterations;
        if (f == 0.0) {
            root.offset = sign * mid;
            root.iterations = iterations;
            return root;
        }
        (f < 0.0 ? lo : hi) = mid;
    }

    // Safeguarded Newton polish.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const auto e = eval(u);
        ++iterations;
        if (e.value == 0.0) break;
        (e.value < 0.0 ? lo : hi) = u;
        double next = u - e.value / e.slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool done = std::abs(next - u) <= 2.0 * eps * u;
        u = next;
        if (done || hi - lo <= 2.0 * eps * hi) break;
    }
    root.offset = sign * u;
    root.iterations = iterations;
    return root;
}

std::vector<SecularRoot> secular_roots_serial(const SecularProblem& problem) {
    std::vector<SecularRoot> roots(problem.poles.size() + 1);
    for (std::size_t j = 0; j < roots.size(); ++j) roots[j] = solve_secular_interval(problem, j);
    return roots;
}

std::vector<SecularRoot> secular_roots_parallel(const SecularProblem& problem) {
    std::vector<SecularRoot> roots(problem.poles.size() + 1);
    const auto n = static_cast<std::ptrdiff_t>(roots.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < n; ++j)
        roots[static_cast<std::size_t>(j)] = solve_secular_interval(problem, static_cast<std::size_t>(j));
    return roots;
}

PanelValue integrate_panel(const ComplexFn& f, Panel panel, double rel_tol, double abs_tol) {
    using Est = detail::RuleEstimate<std::complex<double>>;
    struct Item {
        Panel p;
        Est est;
        int depth;
        double abs_share;
    };
    auto rule = [&f](Panel p) { return detail::gk15<std::complex<double>>(f, p.lo, p.hi); };

    PanelValue out;
    // Depth-first, left before right, so leaves are summed in a fixed order.
    std::vector<Item> stack;
    stack.push_back({panel, rule(panel), 0, abs_tol});
    while (!stack.empty()) {
        Item item = stack.back();
        stack.pop_back();
        const double target = std::max(item.abs_share, rel_tol * item.est.abs_integral);
        const double mid = 0.5 * (item.p.lo + item.p.hi);
        if (item.est.error <= target || item.depth >= 40 || mid <= item.p.lo || mid >= item.p.hi) {
            if (item.est.error > target) out.converged = false;
            out.value += item.est.kronrod;
            out.error += item.est.error;
            continue;
        }
        const Panel left{item.p.lo, mid};
        const Panel right{mid, item.p.hi};
        stack.push_back({right, rule(right), item.depth + 1, 0.5 * item.abs_share});
        stack.push_back({left, rule(left), item.depth + 1, 0.5 * item.abs_share});
    }
    return out;
}

namespace {

double total_width(std::span<const Panel> panels) {
    double w = 0.0;
    for (const auto& p : panels) w += p.hi - p.lo;
    return w;
}

} // namespace

std::vector<PanelValue> panel_quadrature_serial(const ComplexFn& f, std::span<const Panel> panels,
                                                double rel_tol, double abs_tol_total) {
    std::vector<PanelValue> out(panels.size());
    const double width = total_width(panels);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const double share = width > 0.0 ? abs_tol_total * (panels[i].hi - panels[i].lo) / width : 0.0;
        out[i] = integrate_panel(f, panels[i], rel_tol, share);
    }
    return out;
}

std::vector<PanelValue> panel_quadrature_parallel(const ComplexFn& f, std::span<const Panel> panels,
                                                  double rel_tol, double abs_tol_total) {
    std::vector<PanelValue> out(panels.size());
    const double width = total_width(panels);
    const auto n = static_cast<std::ptrdiff_t>(panels.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double share =
            width > 0.0 ? abs_tol_total * (panels[idx].hi - panels[idx].lo) / width : 0.0;
        out[idx] = integrate_panel(f, panels[idx], rel_tol, share);
    }
    return out;
}

} // namespace qbm::kernels
