#include <benchmark/benchmark.h>

#include "fairtraj/allocation.hpp"
#include "fairtraj/fairness.hpp"
#include "fairtraj/trajectory.hpp"

namespace {

fairtraj::Scenario bench_scenario(int users) {
    fairtraj::Scenario s;
    for (int k = 0; k < users; ++k) {
        const double angle = 2.0 * M_PI * k / users;
        s.users.push_back({900.0 * std::cos(angle), 900.0 * std::sin(angle)});
    }
    s.altitude = 500.0;
    s.v_max = 40.0;
    s.horizon = 50.0;
    s.slots = 50;
    s.bandwidth_total = 1e7;
    s.power_total = 0.1;
    s.noise_psd = fairtraj::dbm_per_hz_to_w_per_hz(-169.0);
    s.ref_gain = fairtraj::db_to_linear(-50.0);
    s.rician = {0.0, 1.0, -4.3221, 6.0750};
    return s;
}

void BM_FairnessWeights(benchmark::State& state) {
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(state.range(0), 0.1, 5.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fairtraj::weighted_sum(x, 0.2));
    }
}
BENCHMARK(BM_FairnessWeights)->Arg(9)->Arg(64);

void BM_WeightedAllocation(benchmark::State& state) {
    const auto scenario = bench_scenario(static_cast<int>(state.range(0)));
    const auto [traj, theta] = fairtraj::initial_trajectory(scenario);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fairtraj::solve_weighted_allocation(scenario, traj, 0.1, 1e-8));
    }
}
BENCHMARK(BM_WeightedAllocation)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_TrajectoryStep(benchmark::State& state) {
    const auto scenario = bench_scenario(static_cast<int>(state.range(0)));
    const auto [traj, theta] = fairtraj::initial_trajectory(scenario);
    const auto alloc = fairtraj::solve_weighted_allocation(scenario, traj, 0.1, 1e-8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fairtraj::solve_trajectory_step(scenario, alloc, traj, theta, 0.1, 1e-6));
    }
}
BENCHMARK(BM_TrajectoryStep)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
