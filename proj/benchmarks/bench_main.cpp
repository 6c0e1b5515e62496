#include <vector>

#include <benchmark/benchmark.h>

#include <rastab/reception_chain.hpp>
#include <rastab/regions.hpp>
#include <rastab/service_rates.hpp>
#include <rastab/simulator.hpp>

namespace {

using namespace rastab;

CollisionChannel symmetric(std::size_t n, std::size_t m, double q) {
    CollisionChannel c;
    c.n_sources = n;
    c.m_destinations = m;
    c.q_solo.assign(n, q);
    return c;
}

// Uncached recursion; alpha() itself memoizes.
void BM_SolveChain(benchmark::State &state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_chain(m, 0.8).alpha);
    }
}
BENCHMARK(BM_SolveChain)->Arg(2)->Arg(10)->Arg(50)->Arg(500);

void BM_ServiceRates2x2(benchmark::State &state) {
    const auto c = presets::mpr_weak();
    const TransmitPolicy p{{0.6, 0.4}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(service_rates_2x2(c, p));
    }
}
BENCHMARK(BM_ServiceRates2x2);

void BM_ServiceRatesCollision(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto c = symmetric(n, 10, 0.8);
    const TransmitPolicy p{std::vector<double>(n, 0.2)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(service_rates_collision(c, p));
    }
}
BENCHMARK(BM_ServiceRatesCollision)->Arg(2)->Arg(5)->Arg(10);

void BM_OptimizeLambdaN(benchmark::State &state) {
    const auto kind = static_cast<RegionKind>(state.range(0));
    const auto c = symmetric(5, 10, 0.8);
    const std::vector<double> fixed(4, 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_lambdaN(c, fixed, kind).lambda);
    }
    state.SetLabel(to_string(kind));
}
BENCHMARK(BM_OptimizeLambdaN)
    ->Arg(static_cast<int>(RegionKind::stability_lower))
    ->Arg(static_cast<int>(RegionKind::stability_upper))
    ->Arg(static_cast<int>(RegionKind::throughput))
    ->Unit(benchmark::kMillisecond);

void BM_BoundaryPoint(benchmark::State &state) {
    const ChannelModel c = presets::mpr_weak();
    const std::vector<double> grid{0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(boundary_2src(c, RegionKind::stability_exact, grid).points);
    }
}
BENCHMARK(BM_BoundaryPoint)->Unit(benchmark::kMillisecond);

void BM_SimulatorStep(benchmark::State &state) {
    SimConfig s;
    s.channel = symmetric(static_cast<std::size_t>(state.range(0)), 10, 0.8);
    s.p = TransmitPolicy{std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.2)};
    s.lambda = ArrivalRates{std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.02)};
    SlotSimulator sim(s);
    for (auto _ : state) {
        sim.step();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep)->Arg(2)->Arg(5)->Arg(10);

} // namespace

BENCHMARK_MAIN();
