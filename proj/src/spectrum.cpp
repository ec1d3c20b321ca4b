// spectrum.cpp — secular-equation spectrum and the dense Jacobi oracle

#include "qbm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "qbm/error.hpp"
#include "qbm/kernels.hpp"

namespace qbm::spectrum {

namespace {

struct Level {
    double alpha{0.0};
    // Index into the coupled-mode list of the anchoring pole, or npos for a
    // decoupled bath mode / the bare system level.
    std::size_t anchor{npos};
    double offset{0.0};
    std::size_t decoupled_mode{npos};
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

SpectralDecomposition assemble(const model::ModelConfig& config, bool parallel) {
    config.validate();
    const auto& omega = config.bath.omega();
    const auto& g = config.bath.g();
    const std::size_t n = omega.size();

    std::vector<std::size_t> coupled;
    for (std::size_t k = 0; k < n; ++k)
        if (g[k] > 0.0) coupled.push_back(k);

    std::vector<double> poles(coupled.size());
    std::vector<double> g2(coupled.size());
    for (std::size_t j = 0; j < coupled.size(); ++j) {
        poles[j] = omega[coupled[j]];
        g2[j] = g[coupled[j]] * g[coupled[j]];
    }

    std::vector<Level> levels;
    levels.reserve(n + 1);
    if (coupled.empty()) {
        levels.push_back({config.omega, Level::npos, 0.0, Level::npos});
    } else {
        const kernels::SecularProblem problem{config.omega, poles, g2};
        const auto roots = parallel ? kernels::secular_roots_parallel(problem)
                                    : kernels::secular_roots_serial(problem);
        for (const auto& r : roots) levels.push_back({poles[r.anchor] + r.offset, r.anchor, r.offset, Level::npos});
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!(g[k] > 0.0)) levels.push_back({omega[k], Level::npos, 0.0, k});

    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& a, const Level& b) { return a.alpha < b.alpha; });

    SpectralDecomposition out;
    out.alphas.resize(levels.size());
    out.weights.resize(levels.size());
    out.overlaps = Matrix::Zero(static_cast<Eigen::Index>(levels.size()), static_cast<Eigen::Index>(n));

    const auto count = static_cast<std::ptrdiff_t>(levels.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto v = static_cast<std::size_t>(i);
        const Level& lv = levels[v];
        out.alphas[v] = lv.alpha;
        if (lv.decoupled_mode != Level::npos) {
            out.weights[v] = 0.0;
            out.overlaps(i, static_cast<Eigen::Index>(lv.decoupled_mode)) = 1.0;
            continue;
        }
        if (lv.anchor == Level::npos) { // fully decoupled system level
            out.weights[v] = 1.0;
            continue;
        }
        std::vector<double> ratio(coupled.size());
        double norm = 1.0;
        for (std::size_t j = 0; j < coupled.size(); ++j) {
            const double d = (poles[lv.anchor] - poles[j]) + lv.offset;
            ratio[j] = g[coupled[j]] / d;
            norm += ratio[j] * ratio[j];
        }
        const double w = 1.0 / norm;
        const double phi = std::sqrt(w);
        out.weights[v] = w;
        for (std::size_t j = 0; j < coupled.size(); ++j)
            out.overlaps(i, static_cast<Eigen::Index>(coupled[j])) = phi * ratio[j];
    }
    return out;
}

} // namespace

std::vector<double> SpectralDecomposition::amplitudes() const {
    std::vector<double> out(weights.size());
    std::transform(weights.begin(), weights.end(), out.begin(), [](double w) { return std::sqrt(w); });
    return out;
}

double secular_function(double alpha, const model::ModelConfig& config) {
    config.validate();
    const auto& omega = config.bath.omega();
    const auto& g = config.bath.g();
    double sum = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (!(g[k] > 0.0)) continue;
        if (alpha == omega[k]) throw PoleError("secular_function: alpha sits on a pole");
        sum += g[k] * g[k] / (alpha - omega[k]);
    }
    return alpha - config.omega - sum;
}

std::vector<double> eigenvalues(const model::ModelConfig& config) {
    return decompose(config).alphas;
}

std::vector<double> weights(const model::ModelConfig& config, std::span<const double> alphas) {
    config.validate();
    const auto& omega = config.bath.omega();
    const auto& g = config.bath.g();
    std::vector<double> out(alphas.size());
    for (std::size_t v = 0; v < alphas.size(); ++v) {
        double norm = 1.0;
        bool on_decoupled = false;
        for (std::size_t k = 0; k < omega.size(); ++k) {
            if (alphas[v] == omega[k]) {
                if (g[k] > 0.0) throw PoleError("weights: alpha sits on a pole");
                on_decoupled = true;
                break;
            }
            if (g[k] > 0.0) {
                const double r = g[k] / (alphas[v] - omega[k]);
                norm += r * r;
            }
        }
        out[v] = on_decoupled ? 0.0 : 1.0 / norm;
    }
    return out;
}

Matrix overlaps(const model::ModelConfig& config, std::span<const double> alphas,
                std::span<const double> w) {
    config.validate();
    if (alphas.size() != w.size()) throw DomainError("overlaps: alphas and weights differ in length");
    const auto& omega = config.bath.omega();
    const auto& g = config.bath.g();
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(alphas.size()), static_cast<Eigen::Index>(omega.size()));
    for (std::size_t v = 0; v < alphas.size(); ++v) {
        const double phi = std::sqrt(w[v]);
        for (std::size_t k = 0; k < omega.size(); ++k) {
            const auto row = static_cast<Eigen::Index>(v);
            const auto col = static_cast<Eigen::Index>(k);
            if (alphas[v] == omega[k]) {
                if (g[k] > 0.0) throw PoleError("overlaps: alpha sits on a pole");
                c(row, col) = 1.0;
                continue;
            }
            c(row, col) = phi * g[k] / (alphas[v] - omega[k]);
        }
    }
    return c;
}

SpectralDecomposition decompose(const model::ModelConfig& config) {
    return assemble(config, true);
}

SpectralDecomposition decompose_serial(const model::ModelConfig& config) {
    return assemble(config, false);
}

SpectralDecomposition dense_oracle(const model::ModelConfig& config) {
    config.validate();
    const std::size_t n = config.bath.size();
    if (n > dense_oracle_limit) throw CapabilityError("dense_oracle: N exceeds the dense limit");
    const auto dim = static_cast<Eigen::Index>(n + 1);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    a(0, 0) = config.omega;
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = static_cast<Eigen::Index>(k + 1);
        a(i, i) = config.bath.omega()[k];
        a(0, i) = a(i, 0) = config.bath.g()[k];
    }
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(dim, dim);

    const double frob = a.norm();
    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index q = 1; q < dim; ++q)
            for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    // Cyclic Jacobi with rotations chosen as in Golub & Van Loan (sym.schur2).
    constexpr int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() > 1e-12 * std::max(frob, 1e-300); ++sweep) {
        for (Eigen::Index p = 0; p < dim - 1; ++p) {
            for (Eigen::Index q = p + 1; q < dim; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < dim; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < dim; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < dim; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps) throw NumericalError("dense_oracle: Jacobi did not converge");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

    SpectralDecomposition out;
    out.alphas.resize(static_cast<std::size_t>(dim));
    out.weights.resize(static_cast<std::size_t>(dim));
    out.overlaps = Matrix::Zero(dim, static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < order.size(); ++r) {
        const Eigen::Index col = order[r];
        out.alphas[r] = a(col, col);
        double sign = v(0, col) >= 0.0 ? 1.0 : -1.0;
        if (v(0, col) == 0.0) {
            Eigen::Index big = 0;
            v.col(col).cwiseAbs().maxCoeff(&big);
            sign = v(big, col) >= 0.0 ? 1.0 : -1.0;
        }
        out.weights[r] = v(0, col) * v(0, col);
        for (std::size_t k = 0; k < n; ++k)
            out.overlaps(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
                sign * v(static_cast<Eigen::Index>(k + 1), col);
    }
    return out;
}

} // namespace qbm::spectrum
