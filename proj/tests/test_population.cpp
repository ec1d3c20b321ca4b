// test_population.cpp — exact occupation dynamics, asymptotic populations, low-T scaling, Tsallis map

#include <doctest.h>

#include <cmath>

#include "qbm/dynamics.hpp"
#include "qbm/error.hpp"
#include "qbm/perturbation.hpp"
#include "qbm/population.hpp"
#include "qbm/spectrum.hpp"
#include "support.hpp"

using namespace qbm;

TEST_SUITE("population") {

TEST_CASE("decoupled oscillator keeps its occupation") {
    auto cfg = test::decoupled({0.5, 2.0});
    cfg.beta = 0.7;
    const auto spec = spectrum::decompose(cfg);
    const auto t = linear_grid(0.0, 50.0, 51);
    const auto p = population::exact_trajectory(spec, model::thermal_state(cfg), 2.5, t, cfg.beta);
    for (double v : p.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(p.asymptote == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("zero-temperature bath: N(t) = P_00(t) N0") {
    std::mt19937_64 rng(17);
    auto cfg = test::random_model(rng, 60);
    cfg.beta = std::numeric_limits<double>::infinity();
    const auto spec = spectrum::decompose(cfg);
    const auto t = linear_grid(0.0, 80.0, 161);
    const auto p = population::exact_trajectory(spec, model::thermal_state(cfg), 3.0, t);
    const auto a = dynamics::survival_amplitude(spec, t);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(p.values[i] - 3.0 * std::norm(a.values[i])) < 1e-13);
}

TEST_CASE("resonant pair: exact trajectory and its time average") {
    const auto cfg = test::resonant(1.0);
    const auto spec = spectrum::decompose(cfg);
    const double n1 = model::bose_occupation(1.0, 1.0);
    const auto t = linear_grid(0.0, 100.0, 101);
    const auto p = population::exact_trajectory(spec, model::thermal_state(cfg), 2.0, t, 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double c = std::cos(0.1 * t[i]), s = std::sin(0.1 * t[i]);
        CHECK(std::abs(p.values[i] - (2.0 * c * c + n1 * s * s)) < 1e-13);
    }
    CHECK(p.asymptote == doctest::Approx(0.5 * (2.0 + n1)).epsilon(1e-13));
}

TEST_CASE("asymptotic population") {
    const auto c = test::weak_coupling();
    const resolvent::ResolventModel m(c, 1.0);
    const double shifted = 1.0 + perturbation::frequency_shift(c, 1.0);
    CHECK(test::rel_err(population::asymptotic_population(m, 1.0), model::bose_occupation(1.0, shifted)) < 0.03);
    CHECK(population::asymptotic_population(m, std::numeric_limits<double>::infinity()) == 0.0);
    // Classical regime: ~ 1 / (beta (Omega + dOmega)).
    const double beta = 0.01;
    CHECK(test::rel_err(population::asymptotic_population(m, beta), 1.0 / (beta * shifted)) < 0.03);
    CHECK_THROWS_AS(population::asymptotic_population(m, 0.0), DomainError);
}

TEST_CASE("Boltzmann and Bose weights agree when the spectrum is gapped") {
    const resolvent::ResolventModel m(model::CouplingFunction::window(0.002, 0.5, 1.5), 1.0);
    const double a = population::asymptotic_population(m, 10.0);
    const double b = population::low_temp_population(m, 10.0);
    CHECK(test::rel_err(b, a) < 0.01);
}

TEST_CASE("low-temperature population equals A(t = -i beta)") {
    const resolvent::ResolventModel m(model::CouplingFunction::power_exponential(0.12979, 1.0, 1.0), 1.0);
    for (double beta : {1.0, 10.0, 100.0}) {
        const double lap = population::low_temp_population(m, beta);
        const auto f = resolvent::survival_amplitude_at(m, {0.0, -beta});
        CHECK(test::rel_err(std::abs(f), lap) < 1e-6);
    }
}

TEST_CASE("temperature scan: exponent n + 1 and q = (n + 2) / (n + 1)") {
    const auto betas = log_grid(5.0, 500.0, 21);
    const resolvent::ResolventModel m1(model::CouplingFunction::power_exponential(0.12979, 1.0, 1.0), 1.0);
    const auto f1 = population::temperature_scan(m1, betas);
    CHECK(std::abs(f1.exponent / 2.0 - 1.0) < 0.1);
    CHECK(std::abs(f1.q - 1.5) < 0.05);
    CHECK(f1.q == doctest::Approx((f1.threshold_exponent + 2) / (f1.threshold_exponent + 1)));
    CHECK(f1.heat_capacity_exponent == doctest::Approx(f1.exponent - 1.0));
    CHECK(f1.warnings.empty());

    const resolvent::ResolventModel m2(model::CouplingFunction::power_exponential(0.3528, 2.0, 0.5), 1.0);
    const auto f2 = population::temperature_scan(m2, betas);
    CHECK(std::abs(f2.exponent / 3.0 - 1.0) < 0.1);
    CHECK(std::abs(f2.q - 4.0 / 3.0) < 0.1 / 3.0);

    const auto narrow = log_grid(5.0, 20.0, 6);
    CHECK_FALSE(population::temperature_scan(m1, narrow).warnings.empty());
}

TEST_CASE("Tsallis occupation") {
    for (double x : {0.3, 1.0, 4.0}) {
        const double bose = 1.0 / std::expm1(x);
        CHECK(test::rel_err(population::tsallis_occupation(1.0 + 1e-8, x, 1.0), bose) < 1e-6);
    }
    // q = 3/2: slope -2 for beta w >> 1.
    const double a = population::tsallis_occupation(1.5, 1e4, 1.0);
    const double b = population::tsallis_occupation(1.5, 1e5, 1.0);
    CHECK(std::abs(std::log(b / a) / std::log(10.0) + 2.0) < 1e-3);
    for (double q : {1.2, 1.5, 1.9}) CHECK(test::rel_err(population::tsallis_occupation(q, 1e-6, 1.0), 1e6) < 1e-5);
    CHECK_THROWS_AS(population::tsallis_occupation(2.5, 1.0, 1.0), DomainError);
}

}
