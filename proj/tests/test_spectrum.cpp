// test_spectrum.cpp — secular equation, weights, overlaps against analytic cases and Eigen

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "qbm/error.hpp"
#include "qbm/parallel.hpp"
#include "qbm/spectrum.hpp"
#include "support.hpp"

using namespace qbm;

namespace {

// Independent oracle: Eigen's self-adjoint solver on the dense arrowhead matrix.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_oracle(const model::ModelConfig& c) {
    const auto n = static_cast<Eigen::Index>(c.bath.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    h(0, 0) = c.omega;
    for (Eigen::Index k = 0; k < n; ++k) {
        h(k + 1, k + 1) = c.bath.omega()[static_cast<std::size_t>(k)];
        h(0, k + 1) = h(k + 1, 0) = c.bath.g()[static_cast<std::size_t>(k)];
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h);
}

model::ModelConfig three_level() {
    model::ModelConfig c;
    c.omega = 1.0;
    c.bath = model::BathSpec({0.5, 1.5}, {0.2, 0.2});
    return c;
}

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("secular function") {
    const auto d = test::decoupled({0.5, 2.0});
    CHECK(spectrum::secular_function(0.3, d) == doctest::Approx(0.3 - 1.0));
    const auto r = test::resonant();
    CHECK(std::abs(spectrum::secular_function(0.9, r)) < 1e-15);
    CHECK(std::abs(spectrum::secular_function(1.1, r)) < 1e-15);
    // Just above a pole S -> -inf, just below +inf.
    CHECK(spectrum::secular_function(1.0 + 1e-9, r) < -1e6);
    CHECK(spectrum::secular_function(1.0 - 1e-9, r) > 1e6);
    CHECK_THROWS_AS(spectrum::secular_function(1.0, r), PoleError);
}

TEST_CASE("resonant 2x2") {
    const auto s = spectrum::decompose(test::resonant());
    REQUIRE(s.levels() == 2);
    CHECK(s.alphas[0] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(s.alphas[1] == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(s.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(s.overlaps(0, 0)) - r) < 1e-14);
    CHECK(std::abs(std::abs(s.overlaps(1, 0)) - r) < 1e-14);
    CHECK(s.overlaps(0, 0) * s.overlaps(1, 0) < 0.0);
}

TEST_CASE("decoupled bath") {
    const auto cfg = test::decoupled({0.5, 2.0, 3.0});
    const auto s = spectrum::decompose(cfg);
    REQUIRE(s.levels() == 4);
    const std::vector<double> want{0.5, 1.0, 2.0, 3.0};
    for (std::size_t v = 0; v < 4; ++v) CHECK(s.alphas[v] == want[v]);
    CHECK(s.weights == std::vector<double>{0.0, 1.0, 0.0, 0.0});
    // Bath roots map to unit bath vectors.
    CHECK(s.overlaps(0, 0) == 1.0);
    CHECK(s.overlaps(2, 1) == 1.0);
    CHECK(s.overlaps(3, 2) == 1.0);
    CHECK(s.overlaps.row(1).norm() == 0.0);
}

TEST_CASE("three-level case against the dense oracle") {
    const auto cfg = three_level();
    const auto s = spectrum::decompose(cfg);
    CHECK(s.alphas[0] < 0.5);
    CHECK((s.alphas[1] > 0.5 && s.alphas[1] < 1.5));
    CHECK(s.alphas[2] > 1.5);
    const auto es = eigen_oracle(cfg);
    for (Eigen::Index v = 0; v < 3; ++v) {
        const auto u = static_cast<std::size_t>(v);
        CHECK(std::abs(s.alphas[u] - es.eigenvalues()(v)) < 1e-13);
        const Eigen::VectorXd vec = es.eigenvectors().col(v);
        CHECK(std::abs(s.weights[u] - vec(0) * vec(0)) < 1e-10);
        const double sign = vec(0) >= 0 ? 1.0 : -1.0;
        for (Eigen::Index k = 0; k < 2; ++k) CHECK(std::abs(s.overlaps(v, k) - sign * vec(k + 1)) < 1e-10);
    }
    const auto j = spectrum::dense_oracle(cfg);
    for (std::size_t v = 0; v < 3; ++v) CHECK(std::abs(j.alphas[v] - s.alphas[v]) < 1e-13);
}

TEST_CASE("invariants on random baths") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cfg = test::random_model(rng, 1 + static_cast<std::size_t>(trial) * 7);
        const auto s = spectrum::decompose(cfg);
        const auto& w = cfg.bath.omega();
        double sum = 0.0;
        for (double x : s.weights) {
            CHECK(x > 0.0);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
        for (std::size_t k = 0; k < w.size(); ++k) {
            CHECK(s.alphas[k] < w[k]);
            CHECK(w[k] < s.alphas[k + 1]);
        }
        // Full eigenvector matrix [Phi | c] is orthogonal.
        const auto n = static_cast<Eigen::Index>(s.levels());
        Eigen::MatrixXd u(n, n);
        const auto phi = s.amplitudes();
        for (Eigen::Index v = 0; v < n; ++v) {
            u(v, 0) = phi[static_cast<std::size_t>(v)];
            for (Eigen::Index k = 1; k < n; ++k) u(v, k) = s.overlaps(v, k - 1);
        }
        CHECK((u * u.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
        const auto es = eigen_oracle(cfg);
        for (Eigen::Index v = 0; v < n; ++v)
            CHECK(test::rel_err(s.alphas[static_cast<std::size_t>(v)], es.eigenvalues()(v)) < 1e-9);
    }
}

TEST_CASE("near-degenerate roots keep full relative accuracy in the weights") {
    // Tiny couplings put roots within ~1e-12 of the poles.
    model::ModelConfig c;
    c.omega = 1.0;
    c.bath = model::BathSpec({0.5, 0.8, 1.3}, {1e-6, 2e-6, 1e-6});
    const auto s = spectrum::decompose(c);
    const auto es = eigen_oracle(c);
    for (Eigen::Index v = 0; v < 4; ++v) {
        const double want = es.eigenvectors()(0, v) * es.eigenvectors()(0, v);
        if (want > 1e-6) CHECK(test::rel_err(s.weights[static_cast<std::size_t>(v)], want) < 1e-8);
    }
    // Bath-like levels: weight g^2 / (alpha - w)^2 to leading order.
    const double lead = 1e-12 / (0.5 - 1.0) / (0.5 - 1.0);
    CHECK(test::rel_err(s.weights[0], lead) < 1e-3);
}

TEST_CASE("parallel decomposition is bit-identical to the serial reference") {
    const int saved = parallel::max_threads();
    const auto cfg = test::weak_model(300);
    const auto ref = spectrum::decompose_serial(cfg);
    for (int th : {1, 2, 4}) {
        parallel::set_threads(th);
        const auto s = spectrum::decompose(cfg);
        CHECK(s.alphas == ref.alphas);
        CHECK(s.weights == ref.weights);
        CHECK(s.overlaps == ref.overlaps);
    }
    parallel::set_threads(saved);
}

TEST_CASE("dense oracle refuses oversized baths") {
    const auto cfg = test::weak_model(spectrum::dense_oracle_limit + 1);
    CHECK_THROWS_AS(spectrum::dense_oracle(cfg), CapabilityError);
}

}
