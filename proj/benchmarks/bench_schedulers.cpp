#include <benchmark/benchmark.h>

#include <vector>

#include "mecsched/schedulers.hpp"

using namespace mecsched;

namespace {

Scenario make(std::size_t users, std::size_t subcarriers) {
    ScenarioConfig cfg;
    cfg.num_users = users;
    cfg.num_subcarriers = subcarriers;
    cfg.rng_seed = 42;
    return generate_scenario(cfg);
}

void BM_WaterFill(benchmark::State& state) {
    std::vector<double> gains(static_cast<std::size_t>(state.range(0)));
    for (std::size_t j = 0; j < gains.size(); ++j) gains[j] = 1.0 + static_cast<double>(j);
    for (auto _ : state) benchmark::DoNotOptimize(water_fill(gains, 1.0));
}
BENCHMARK(BM_WaterFill)->Arg(1)->Arg(4)->Arg(16);

void BM_OptimalTransmitPower(benchmark::State& state) {
    const std::vector<double> gains{3.0, 1.5, 0.7};
    const LinkRequest req{18750.0, 1000.0, 0.1, 1.0, 0.05};
    for (auto _ : state) benchmark::DoNotOptimize(optimal_transmit_power(gains, req));
}
BENCHMARK(BM_OptimalTransmitPower);

void BM_DpCpuSchedule(benchmark::State& state) {
    std::vector<DpCandidate> c(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = DpCandidate{1.0 + 0.1 * static_cast<double>(i), 0.005 * static_cast<double>(i), 0.03,
                           0.05 + 0.01 * static_cast<double>(i)};
    }
    for (auto _ : state) benchmark::DoNotOptimize(dp_cpu_schedule(c));
}
BENCHMARK(BM_DpCpuSchedule)->DenseRange(4, 16, 4);

void BM_MinGroup(benchmark::State& state) {
    const Scenario s = make(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(min_group_allocate(s));
}
BENCHMARK(BM_MinGroup)->Arg(4)->Arg(8);

void BM_PerResource(benchmark::State& state) {
    const Scenario s = make(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(per_resource_allocate(s));
}
BENCHMARK(BM_PerResource)->Arg(4)->Arg(8);

void BM_Joint(benchmark::State& state) {
    const Scenario s = make(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(joint_allocate(s));
}
BENCHMARK(BM_Joint)->Arg(4)->Arg(8);

void BM_ExhaustiveConstrained(benchmark::State& state) {
    const Scenario s = make(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_optimal(s, true));
}
BENCHMARK(BM_ExhaustiveConstrained)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
BENCHMARK_MAIN();
