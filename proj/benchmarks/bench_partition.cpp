#include <benchmark/benchmark.h>

#include "dncsc/dataset.hpp"
#include "dncsc/landmark.hpp"
#include "dncsc/partition.hpp"
#include "dncsc/similarity.hpp"

namespace {

dncsc::SparseAffinity make_affinity(std::uint32_t n, std::uint32_t p) {
    dncsc::SyntheticSpec spec;
    spec.shape = dncsc::Shape::kGaussianBlobs;
    spec.n = n;
    spec.blobs = {20, 0.35, -10.0, 10.0};
    spec.seed = 4;
    const auto data = dncsc::generate(spec);
    const auto lm = dncsc::select_landmarks_dnc(data.points, p, 50, 10 * p, 5, 1);
    const auto nn = dncsc::approx_knn(data.points, lm, 5, std::min(50u, p));
    return dncsc::build_affinity(nn, dncsc::estimate_bandwidth(nn, {}));
}

void BM_SolveReduced(benchmark::State& state) {
    const auto b = make_affinity(20000, static_cast<std::uint32_t>(state.range(0)));
    const auto deg = dncsc::degrees(b);
    const auto l_r = dncsc::reduced_laplacian(b, deg);
    const auto d_r = deg.kept_d_r();
    for (auto _ : state) benchmark::DoNotOptimize(dncsc::solve_reduced(l_r, d_r, 10));
}
BENCHMARK(BM_SolveReduced)->Arg(100)->Arg(250)->Arg(500)->Arg(1000)
    ->Unit(benchmark::kMillisecond);

void BM_LiftAndCluster(benchmark::State& state) {
    const auto b = make_affinity(static_cast<std::uint32_t>(state.range(0)), 500);
    const auto deg = dncsc::degrees(b);
    const auto spec = dncsc::solve_reduced(dncsc::reduced_laplacian(b, deg),
                                           deg.kept_d_r(), 20);
    for (auto _ : state) {
        const auto emb = dncsc::lift(b, deg, spec);
        benchmark::DoNotOptimize(dncsc::cluster_embedding(emb, 20, 7));
    }
}
BENCHMARK(BM_LiftAndCluster)->Arg(50000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
