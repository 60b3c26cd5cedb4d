#include <benchmark/benchmark.h>

#include <random>

#include "sumcap/projection.hpp"
#include "sumcap/solver.hpp"

using namespace sumcap;

namespace {

std::vector<HermMatrix> randomBlocks(int users, int nr, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<HermMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(users));
    for (int i = 0; i < users; ++i) {
        CMatrix m(nr, nr);
        for (int r = 0; r < nr; ++r)
            for (int c = 0; c < nr; ++c) m(r, c) = Cplx(n01(eng), n01(eng));
        blocks.emplace_back(m);
    }
    return blocks;
}

}  // namespace

static void BM_HermEig(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const HermMatrix a = randomBlocks(1, n, 1)[0];
    for (auto _ : state) benchmark::DoNotOptimize(herm_eig(a));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermEig)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_Project(benchmark::State& state) {
    const auto users = static_cast<int>(state.range(0));
    const auto blocks = randomBlocks(users, 4, 2);
    for (auto _ : state) benchmark::DoNotOptimize(project(blocks, 10.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Project)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_Gradients(benchmark::State& state) {
    const auto users = static_cast<int>(state.range(0));
    const ChannelSet c = generate_rayleigh(users, 4, 4, 10.0, 3);
    const CovarianceSet q = uniform_power_init(c);
    for (auto _ : state) benchmark::DoNotOptimize(gradients(q, c));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradients)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_Objective(benchmark::State& state) {
    const auto users = static_cast<int>(state.range(0));
    const ChannelSet c = generate_rayleigh(users, 4, 4, 10.0, 4);
    const CovarianceSet q = uniform_power_init(c);
    for (auto _ : state) benchmark::DoNotOptimize(objective(q, c));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Objective)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_SolveHundredUsers(benchmark::State& state) {
    const ChannelSet c = generate_rayleigh(100, 4, 4, 10.0, 5);
    const SolverConfig cfg;
    for (auto _ : state) {
        const SolveResult res = solve(c, cfg);
        benchmark::DoNotOptimize(res.objective_nats);
    }
}
BENCHMARK(BM_SolveHundredUsers)->Unit(benchmark::kMillisecond);
