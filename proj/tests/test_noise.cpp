// test_noise.cpp — noise kernel: discrete sum, operator oracle, continuum, classical limit

#include <doctest.h>

#include <cmath>
#include <random>

#include "qbm/noise.hpp"
#include "qbm/perturbation.hpp"
#include "support.hpp"

using namespace qbm;
using qbm::test::pi;

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d / std::max(max_abs(b), 1e-300);
}

} // namespace

TEST_SUITE("noise") {

TEST_CASE("coth(beta w / 2)") {
    CHECK(noise::coth_half(std::numeric_limits<double>::infinity(), 1.0) == 1.0);
    CHECK(noise::coth_half(1.0, 1.0) == doctest::Approx(1.0 / std::tanh(0.5)).epsilon(1e-15));
    CHECK(noise::coth_half(1.0, 1.0) == doctest::Approx(2 * model::bose_occupation(1.0, 1.0) + 1).epsilon(1e-14));
    const double x = 1e-5;
    CHECK(noise::coth_half(1.0, x) == doctest::Approx(2.0 / x + x / 6.0).epsilon(1e-15));
}

TEST_CASE("decoupled bath has no noise") {
    const auto cfg = test::decoupled({0.5, 2.0});
    const auto th = model::thermal_state(cfg);
    const auto t = linear_grid(0.0, 10.0, 11);
    for (double k : noise::autocorrelation_discrete(cfg, th, t).values) CHECK(k == 0.0);
    for (double k : noise::operator_oracle(cfg, th, t).values) CHECK(k == 0.0);
}

TEST_CASE("single resonant mode at T = 0: K = 0.02 cos t") {
    const auto cfg = test::resonant();
    const auto th = model::thermal_state(cfg);
    const auto t = linear_grid(0.0, 20.0, 201);
    const auto k = noise::autocorrelation_discrete(cfg, th, t);
    const auto o = noise::operator_oracle(cfg, th, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(std::abs(k.values[i] - 0.02 * std::cos(t[i])) < 1e-16);
        CHECK(std::abs(o.values[i] - k.values[i]) < 1e-10 * 0.02);
    }
    CHECK(k.values[0] == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("operator oracle equals the discrete kernel on random thermal baths") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto cfg = test::random_model(rng, 40 + 10 * static_cast<std::size_t>(trial));
        cfg.beta = (trial % 3 == 0) ? std::numeric_limits<double>::infinity() : 0.3 + 0.5 * trial;
        cfg.mass = 0.5 + 0.25 * trial;
        const auto th = model::thermal_state(cfg);
        const auto t = linear_grid(0.0, 60.0, 301);
        const auto k = noise::autocorrelation_discrete(cfg, th, t);
        const auto o = noise::operator_oracle(cfg, th, t);
        CHECK(max_rel_diff(o.values, k.values) < 1e-10);
        CHECK(k.values[0] >= 0.0);
    }
}

TEST_CASE("continuum kernel: zero coupling and the discrete limit") {
    const auto t = linear_grid(0.0, 20.0, 81);
    const auto zero = model::CouplingFunction::power_exponential(0.0, 1.0, 1.0);
    for (double k : noise::autocorrelation_continuum(zero, 1.0, 1.0, 1.0, t).values) CHECK(k == 0.0);

    const auto cfg = test::weak_model(2000);
    const auto th = model::thermal_state(cfg);
    const auto disc = noise::autocorrelation_discrete(cfg, th, t);
    const auto cont = noise::autocorrelation_continuum(test::weak_coupling(), 1.0, 1.0, 1.0, t);
    CHECK(max_rel_diff(disc.values, cont.values) < 0.01);

    // Refinement decreases the discrepancy.
    double prev = 1e300;
    for (std::size_t n : {250ul, 500ul, 1000ul}) {
        const auto c = test::weak_model(n);
        const auto d = noise::autocorrelation_discrete(c, model::thermal_state(c), t);
        const double e = max_rel_diff(d.values, cont.values);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("continuum kernel for a narrow g^2 around Omega takes the (gamma / M pi) int w coth cos form") {
    const double half = 0.05, lambda = 0.002, mass = 1.7, beta = 2.0;
    const auto c = model::CouplingFunction::window(lambda, 1.0 - half, 1.0 + half);
    const double gamma = 2 * pi * lambda;
    const auto t = linear_grid(0.0, 5.0, 21);
    const auto k = noise::autocorrelation_continuum(c, beta, mass, 1.0, t);
    std::vector<double> approx;
    for (double ti : t)
        approx.push_back(gamma / (mass * pi) *
                         test::simpson([&](double w) { return w * noise::coth_half(beta, w) * std::cos(w * ti); },
                                       1.0 - half, 1.0 + half, 2000));
    CHECK(max_rel_diff(k.values, approx) < 0.01);
}

TEST_CASE("classical limit: finite-part mass, scaling and tail") {
    const double gamma = 0.1, temp = 0.7, mass = 1.3, hbar = 1.0;
    const double tmax = 10.0 * hbar / (pi * temp);
    const double m = noise::white_noise_mass(gamma, temp, mass, hbar, tmax);
    CHECK(std::abs(m / (gamma * temp / mass) - 1.0) < 0.01);
    CHECK(std::abs(noise::white_noise_mass(gamma, temp, mass, 0.3, 100.0) / (gamma * temp / mass) - 1.0) < 1e-8);

    const auto t = linear_grid(0.0, 3.0, 31);
    const auto k = noise::classical_limit_kernel(gamma, temp, mass, hbar, t);
    CHECK(k.singular[0] == 1);
    CHECK(std::isnan(k.values[0]));
    // hbar halved: K'(t) = 2 K(2t).
    std::vector<double> half_t;
    for (double x : t) half_t.push_back(0.5 * x);
    const auto kh = noise::classical_limit_kernel(gamma, temp, mass, 0.5 * hbar, half_t);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(test::rel_err(kh.values[i], 2.0 * k.values[i]) < 1e-12);
    // Tail: ln|K| slope -> -2 pi T / hbar.
    const double rate = noise::classical_tail_rate(temp, hbar);
    CHECK(rate == doctest::Approx(2 * pi * temp / hbar));
    const double ts[] = {8.0, 9.0};
    const auto tail = noise::classical_limit_kernel(gamma, temp, mass, hbar, ts);
    CHECK(std::abs(std::log(tail.values[1] / tail.values[0]) / -1.0 / rate - 1.0) < 1e-6);
    // hbar = 0: vanishes for t > 0.
    const auto cl = noise::classical_limit_kernel(gamma, temp, mass, 0.0, t);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(cl.values[i] == 0.0);
}

}
