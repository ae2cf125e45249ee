#include <benchmark/benchmark.h>

#include <vector>

#include "eeafs/batch.hpp"
#include "eeafs/scenario.hpp"

using namespace eeafs;

namespace {

std::vector<ScenarioConfig> beta_configs()
{
    std::vector<ScenarioConfig> out;
    for (const auto& c : make_sweep("beta-sweep").cases)
        out.push_back(c.config);
    return out;
}

SurfaceSpec fine_surface()
{
    SurfaceSpec s;
    s.step = 0.01;
    return s;
}

void BM_BatchSerial(benchmark::State& state)
{
    const auto configs = beta_configs();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_batch_serial(configs, {false}));
}

void BM_BatchParallel(benchmark::State& state)
{
    const auto configs = beta_configs();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_batch_parallel(configs, {false}, threads));
}

void BM_SurfaceSerial(benchmark::State& state)
{
    const auto spec = fine_surface();
    for (auto _ : state)
        benchmark::DoNotOptimize(energy_surface_serial(spec));
}

void BM_SurfaceParallel(benchmark::State& state)
{
    const auto spec = fine_surface();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(energy_surface_parallel(spec, threads));
}

} // namespace

BENCHMARK(BM_BatchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SurfaceSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SurfaceParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
