// Hot kernels of a run: the periodic banded factor/solve and one Newton step.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kompakton/banded.hpp"
#include "kompakton/stepper.hpp"

using namespace kompakton;

namespace {

PeriodicBandedMatrix random_matrix(std::size_t n) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PeriodicBandedMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int d = -2; d <= 2; ++d) a.at(i, d) = u(rng);
        a.at(i, 0) += 3.0;
    }
    return a;
}

void BM_BandedFactor(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n);
    PeriodicBandedLU lu;
    for (auto _ : state) {
        lu.factor(a);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BandedFactor)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_BandedSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PeriodicBandedLU lu(random_matrix(n));
    std::vector<double> rhs(n, 1.0);
    for (auto _ : state) {
        lu.solve_in_place(rhs);
        benchmark::DoNotOptimize(rhs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BandedSolve)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// One implicit step of the stationary de Frutos compacton at dx = 0.05.
void BM_NewtonStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const GridSpec grid(0.05 * static_cast<double>(n), n);
    const CompactonSpec spec(Rational(2), 1.0, grid.length() / 2.0, 1.0);
    const ImplicitStepper stepper(SchemeId::DeFrutos, {}, spec, grid);
    FieldState u = sample_initial(spec, grid);
    // a few steps in so the radiation is present
    for (int k = 0; k < 3; ++k) u = stepper.step(u, 0.05).first;
    for (auto _ : state) {
        auto next = stepper.step(u, 0.05);
        benchmark::DoNotOptimize(next.first.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NewtonStep)->Arg(4000)->Arg(12000)->Arg(50000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
