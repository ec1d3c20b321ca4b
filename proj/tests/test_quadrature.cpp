// test_quadrature.cpp — Gauss-Kronrod, principal values, Fourier panels, power-law fits

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qbm/error.hpp"
#include "qbm/quadrature.hpp"
#include "support.hpp"

using namespace qbm;
using qbm::test::pi;

TEST_SUITE("quadrature") {

TEST_CASE("plain and mapped integrals") {
    auto one = quad::integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(one.converged);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-15));

    const double inf = std::numeric_limits<double>::infinity();
    auto g1 = quad::integrate([](double w) { return w * std::exp(-w); }, 0.0, inf);
    CHECK(g1.converged);
    CHECK(test::rel_err(g1.value, 1.0) < 1e-10);
    auto g3 = quad::integrate([](double w) { return w * w * w * std::exp(-w); }, 0.0, inf);
    CHECK(test::rel_err(g3.value, 6.0) < 1e-10);
}

TEST_CASE("breakpoints handle a kink") {
    const double bp[] = {0.3};
    auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, bp);
    CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("principal value: constant and window integrands") {
    // int_{a-1}^{a+1} 1/(a - x) dx = 0
    auto z = quad::principal_value([](double) { return 1.0; }, 2.0, 1.0, 3.0);
    CHECK(std::abs(z.value) < 1e-13);
    // lambda on [alpha - a, alpha + b] -> lambda ln(a/b)
    const double lambda = 0.7, alpha = 1.3, a = 0.4, b = 1.1;
    auto w = quad::principal_value([=](double) { return lambda; }, alpha, alpha - a, alpha + b);
    CHECK(w.value == doctest::Approx(lambda * std::log(a / b)).epsilon(1e-13));
}

TEST_CASE("principal value: subtraction and excision paths agree") {
    auto f = [](double x) { return x * std::exp(-x); };
    for (double pole : {0.4, 1.0, 2.7}) {
        auto sub = quad::principal_value(f, pole, 0.0, 40.0);
        auto exc = quad::principal_value_excision(f, pole, 0.0, 40.0);
        CHECK(std::abs(sub.value - exc.value) < 1e-8);
    }
}

TEST_CASE("Fourier integral of w exp(-w) is 1/(1+it)^2") {
    auto f = [](double w) { return w * std::exp(-w); };
    quad::FourierOptions o;
    o.threshold_at_lower = true;
    const double hi = 800.0;
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        auto r = quad::fourier_integral(f, {t, 0.0}, 0.0, hi, o);
        const std::complex<double> want = 1.0 / ((1.0 + std::complex<double>(0.0, t)) * (1.0 + std::complex<double>(0.0, t)));
        CHECK(std::abs(r.value - want) < 1e-10 * std::max(1.0, std::abs(want)) + 1e-14);
        if (t == 0.0) CHECK(std::abs(r.value.imag()) < 1e-15);
    }
}

TEST_CASE("Fourier integral of a Lorentzian is a damped exponential") {
    const double w0 = 20.0, g = 0.5;
    auto f = [=](double w) { return (g / (2 * pi)) / ((w - w0) * (w - w0) + g * g / 4); };
    quad::FourierOptions o;
    o.breakpoints = {w0};
    // Truncated to [w0 - L, w0 + L]; the dropped oscillatory tails are O(g / (pi t L^2)).
    const double L = 2e3;
    for (double t : {1.0, 3.0, 10.0}) {
        auto r = quad::fourier_integral(f, {t, 0.0}, w0 - L, w0 + L, o);
        const auto want = std::exp(std::complex<double>(-g * t / 2, -w0 * t));
        CHECK(std::abs(r.value - want) < 1e-6);
    }
}

TEST_CASE("Fourier integral at t = -i beta is the Laplace transform") {
    auto f = [](double w) { return w * std::exp(-w); };
    quad::FourierOptions o;
    for (double beta : {0.5, 2.0, 10.0}) {
        auto r = quad::fourier_integral(f, {0.0, -beta}, 0.0, 200.0, o);
        CHECK(test::rel_err(r.value.real(), 1.0 / ((1 + beta) * (1 + beta))) < 1e-10);
        CHECK(std::abs(r.value.imag()) < 1e-15);
    }
}

TEST_CASE("Fourier budget exhaustion") {
    quad::FourierOptions o;
    o.max_panels = 100;
    CHECK_THROWS_AS(quad::fourier_integral([](double) { return 1.0; }, {1e6, 0.0}, 0.0, 10.0, o), ResolutionError);
}

TEST_CASE("power-law fits") {
    std::vector<double> x, y, y2, y3;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (int i = 1; i <= 40; ++i) {
        const double xi = 0.5 * i;
        x.push_back(xi);
        y.push_back(xi * xi);
        y2.push_back(3.0 / (xi * xi));
        y3.push_back(xi * xi * (1.0 + 1e-3 * noise(rng)));
    }
    auto a = quad::power_law_fit(x, y);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-13));
    auto b = quad::power_law_fit(x, y2);
    CHECK(b.slope == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(b.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    auto c = quad::power_law_fit(x, y3);
    CHECK(std::abs(c.slope - 2.0) < 1e-2);
    CHECK_THROWS_AS(quad::power_law_fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("pairwise sums are exact on representable data") {
    std::vector<double> v(1000, 0.125);
    CHECK(quad::pairwise_sum(v) == 125.0);
    std::vector<std::complex<double>> c(17, {1.0, -2.0});
    CHECK(quad::pairwise_sum(c) == std::complex<double>(17.0, -34.0));
}

}
