#include <benchmark/benchmark.h>

#include "dncsc/dataset.hpp"
#include "dncsc/landmark.hpp"

namespace {

dncsc::DataMatrix blob_data(std::uint32_t n) {
    dncsc::SyntheticSpec spec;
    spec.shape = dncsc::Shape::kGaussianBlobs;
    spec.n = n;
    spec.blobs = {20, 0.35, -10.0, 10.0};
    spec.seed = 1;
    return dncsc::generate(spec);
}

void BM_SelectDnc(benchmark::State& state) {
    const auto data = blob_data(static_cast<std::uint32_t>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            dncsc::select_landmarks_dnc(data.points, 500, 50, 5000, 5, seed++));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelectDnc)->Arg(25000)->Arg(50000)->Arg(100000)->Arg(200000)
    ->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

void BM_SelectKmeans(benchmark::State& state) {
    const auto data = blob_data(static_cast<std::uint32_t>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            dncsc::select_landmarks_kmeans(data.points, 500, 5, seed++));
}
BENCHMARK(BM_SelectKmeans)->Arg(25000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_SelectRandom(benchmark::State& state) {
    const auto data = blob_data(static_cast<std::uint32_t>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            dncsc::select_landmarks_random(data.points, 500, seed++));
}
BENCHMARK(BM_SelectRandom)->Arg(25000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
