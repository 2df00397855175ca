// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "scandict/experiments.hpp"
#include "scandict/universal.hpp"

using namespace scandict;

namespace {

const LossFn kHamming(LossKind::hamming);

void BM_EvaluatePoolSerial(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const DataArray a = mixed_array(ArrayMix::flip, n, 1);
    const ExpertPool pool = raster_markov_pool(8, 2, Alphabet::binary(), kHamming);
    const BlockLayout layout = block_partition(n, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_pool_serial(a, pool, layout, kHamming));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n * 8);
}

void BM_EvaluatePoolParallel(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const DataArray a = mixed_array(ArrayMix::flip, n, 1);
    const ExpertPool pool = raster_markov_pool(8, 2, Alphabet::binary(), kHamming);
    const BlockLayout layout = block_partition(n, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_pool(a, pool, layout, kHamming));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n * 8);
    state.counters["threads"] = omp_get_max_threads();
}

// Replica loop of the regret experiment at one thread and at the default thread count.
void BM_RegretReplicas(benchmark::State& state)
{
    const int threads = state.range(0) == 0 ? omp_get_max_threads() : static_cast<int>(state.range(0));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(threads);
    RegretParams p;
    p.n = 32;
    p.m = 4;
    p.experts = 8;
    p.arrays = 32;
    p.seeds = 200;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_regret(p));
    }
    omp_set_num_threads(saved);
    state.counters["threads"] = threads;
}

} // namespace

BENCHMARK(BM_EvaluatePoolSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePoolParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegretReplicas)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
