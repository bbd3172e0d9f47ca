#include <benchmark/benchmark.h>

#include "dncsc/dataset.hpp"
#include "dncsc/landmark.hpp"
#include "dncsc/similarity.hpp"

namespace {

struct Fixture {
    dncsc::DataMatrix data;
    dncsc::LandmarkSet landmarks;
};

Fixture make_fixture(std::uint32_t n, std::uint32_t p) {
    dncsc::SyntheticSpec spec;
    spec.shape = dncsc::Shape::kGaussianBlobs;
    spec.n = n;
    spec.blobs = {20, 0.35, -10.0, 10.0};
    spec.seed = 2;
    Fixture f{dncsc::generate(spec), {}};
    f.landmarks = dncsc::select_landmarks_dnc(f.data.points, p, 50, 10 * p, 5, 3);
    return f;
}

void BM_ApproxKnn(benchmark::State& state) {
    const auto f = make_fixture(static_cast<std::uint32_t>(state.range(0)), 500);
    for (auto _ : state)
        benchmark::DoNotOptimize(dncsc::approx_knn(f.data.points, f.landmarks, 5, 50));
}
BENCHMARK(BM_ApproxKnn)->Arg(50000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ExactKnn(benchmark::State& state) {
    const auto f = make_fixture(static_cast<std::uint32_t>(state.range(0)), 500);
    for (auto _ : state)
        benchmark::DoNotOptimize(dncsc::exact_knn(f.data.points, f.landmarks, 5));
}
BENCHMARK(BM_ExactKnn)->Arg(50000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
