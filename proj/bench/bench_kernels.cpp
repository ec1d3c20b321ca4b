// bench_kernels.cpp — serial reference vs OpenMP kernels
//
// Each benchmark takes the thread count as its last argument; 0 selects the
// serial reference. Sizes follow the production paths: N = 2000 modes over a
// few thousand time samples.

#include <cmath>
#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "qbm/kernels.hpp"
#include "qbm/model.hpp"
#include "qbm/parallel.hpp"
#include "qbm/spectrum.hpp"
#include "qbm/types.hpp"

namespace {

using namespace qbm;

const spectrum::SpectralDecomposition& weak_spectrum(std::size_t n) {
    static std::size_t cached_n = 0;
    static spectrum::SpectralDecomposition cached;
    if (cached_n != n) {
        model::ModelConfig cfg;
        cfg.omega = 1.0;
        cfg.bath = model::discretize(model::CouplingFunction::power_exponential(0.0043263, 1.0, 1.0), n, 10.0);
        cached = spectrum::decompose_serial(cfg);
        cached_n = n;
    }
    return cached;
}

// Serial when threads == 0, otherwise the OpenMP form on that many threads.
template <class Serial, class Parallel>
void run(benchmark::State& state, Serial&& serial, Parallel&& parallel) {
    const auto threads = static_cast<int>(state.range(1));
    const int saved = parallel::max_threads();
    if (threads > 0) parallel::set_threads(threads);
    for (auto _ : state) {
        if (threads == 0)
            benchmark::DoNotOptimize(serial());
        else
            benchmark::DoNotOptimize(parallel());
    }
    parallel::set_threads(saved);
    state.counters["threads"] = threads;
}

void BM_SpectralMoments(benchmark::State& state) {
    const auto& s = weak_spectrum(static_cast<std::size_t>(state.range(0)));
    const auto t = linear_grid(0.0, 300.0, 2001);
    run(
        state, [&] { return kernels::spectral_moments_serial(s.weights, s.alphas, t); },
        [&] { return kernels::spectral_moments_parallel(s.weights, s.alphas, t); });
}

void BM_CosineSeries(benchmark::State& state) {
    const auto& s = weak_spectrum(static_cast<std::size_t>(state.range(0)));
    const auto t = linear_grid(0.0, 300.0, 2001);
    run(
        state, [&] { return kernels::cosine_series_serial(s.weights, s.alphas, t); },
        [&] { return kernels::cosine_series_parallel(s.weights, s.alphas, t); });
}

void BM_BathProjection(benchmark::State& state) {
    const auto& s = weak_spectrum(static_cast<std::size_t>(state.range(0)));
    const auto phi = s.amplitudes();
    const std::vector<double> occ(s.modes(), 0.5);
    const auto t = linear_grid(0.0, 300.0, 64);
    run(
        state, [&] { return kernels::bath_projection_serial(phi, s.alphas, s.overlaps, occ, t); },
        [&] { return kernels::bath_projection_parallel(phi, s.alphas, s.overlaps, occ, t); });
}

void BM_SecularRoots(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto bath = model::discretize(model::CouplingFunction::power_exponential(0.0043263, 1.0, 1.0), n, 10.0);
    const auto g2 = bath.g_squared();
    const kernels::SecularProblem problem{1.0, bath.omega(), g2};
    run(
        state, [&] { return kernels::secular_roots_serial(problem); },
        [&] { return kernels::secular_roots_parallel(problem); });
}

void BM_PanelQuadrature(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    std::vector<kernels::Panel> panels(count);
    const double width = 40.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i)
        panels[i] = {width * static_cast<double>(i), width * static_cast<double>(i + 1)};
    const kernels::ComplexFn f = [](double w) {
        const double rho = w * std::exp(-w) / ((w - 1.0) * (w - 1.0) + 1e-4);
        return rho * std::exp(std::complex<double>(0.0, -250.0 * w));
    };
    run(
        state, [&] { return kernels::panel_quadrature_serial(f, panels, 1e-12, 1e-300); },
        [&] { return kernels::panel_quadrature_parallel(f, panels, 1e-12, 1e-300); });
}

void thread_sweep(benchmark::internal::Benchmark* b, std::int64_t size) {
    for (std::int64_t th : {0, 1, 2, 4}) b->Args({size, th});
}

} // namespace

BENCHMARK(BM_SpectralMoments)->Apply([](auto* b) { thread_sweep(b, 2000); })->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CosineSeries)->Apply([](auto* b) { thread_sweep(b, 2000); })->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BathProjection)->Apply([](auto* b) { thread_sweep(b, 1000); })->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SecularRoots)->Apply([](auto* b) { thread_sweep(b, 2000); })->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PanelQuadrature)->Apply([](auto* b) { thread_sweep(b, 4000); })->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
