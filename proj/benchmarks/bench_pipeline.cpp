#include <benchmark/benchmark.h>

#include "dncsc/pipeline.hpp"

namespace {

void BM_Pipeline(benchmark::State& state) {
    dncsc::RunConfig config;
    dncsc::SyntheticSpec spec;
    spec.shape = dncsc::Shape::kTwoMoons;
    spec.n = static_cast<std::uint32_t>(state.range(0));
    spec.noise = 0.05;
    spec.seed = 1;
    config.input = spec;
    config.k = 2;
    config.p = 500;
    config.knn_k = 5;
    config.alpha = 50;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.seed = seed++;
        benchmark::DoNotOptimize(dncsc::run_pipeline(config));
    }
}
BENCHMARK(BM_Pipeline)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
