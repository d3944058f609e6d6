#include <benchmark/benchmark.h>

#include <cmath>

#include "diffract/aperture.hpp"
#include "diffract/longitudinal.hpp"
#include "diffract/numerics.hpp"
#include "diffract/theories.hpp"

namespace {

const double kWavenumber = 2.0 * M_PI / 0.6328;

void BM_BesselJ1Series(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffract::bessel_j1(x));
        x = x < 8.9 ? x + 0.09 : 0.1;
    }
}
BENCHMARK(BM_BesselJ1Series);

void BM_BesselJ1Recurrence(benchmark::State& state) {
    double x = 9.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffract::bessel_j1(x));
        x = x < 49.0 ? x + 0.37 : 9.5;
    }
}
BENCHMARK(BM_BesselJ1Recurrence);

void BM_RectTransverseTerm(benchmark::State& state) {
    const diffract::ApertureShape slit = diffract::ApertureShape::rectangle(5, 50);
    double theta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(slit.transverse_term(kWavenumber, theta, 0.0));
        theta = theta < 1.5 ? theta + 1e-3 : 0.0;
    }
}
BENCHMARK(BM_RectTransverseTerm);

void BM_PolygonTransverseFt(benchmark::State& state) {
    std::vector<diffract::Vec2> hexagon;
    for (int i = 0; i < 6; ++i)
        hexagon.push_back({3.0 * std::cos(i * M_PI / 3.0), 3.0 * std::sin(i * M_PI / 3.0)});
    const diffract::ApertureShape shape = diffract::ApertureShape::polygon(hexagon);
    double px = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(shape.transverse_ft(px, 0.4));
        px = px < 9.0 ? px + 0.01 : 0.0;
    }
}
BENCHMARK(BM_PolygonTransverseFt);

void BM_QuantumIntensity(benchmark::State& state) {
    const diffract::ApertureShape slit = diffract::ApertureShape::rectangle(5, 50);
    const diffract::LongitudinalFilter filter = diffract::LongitudinalFilter::gaussian(0.5);
    double theta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            diffract::quantum_relative_intensity(filter, slit, kWavenumber, theta, 0.0));
        theta = theta < 1.5 ? theta + 1e-3 : 0.0;
    }
}
BENCHMARK(BM_QuantumIntensity);

void BM_AdaptiveGaussian(benchmark::State& state) {
    for (auto _ : state) {
        auto r = diffract::integrate_adaptive(
            [](double x) { return std::exp(-0.5 * x * x); }, -5.0, 5.0, {64, 1e-10, 12});
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_AdaptiveGaussian);

}  // namespace

BENCHMARK_MAIN();
