#include <benchmark/benchmark.h>

#include <random>

#include "reebmm/diagram.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/reeb_graph.hpp"
#include "reebmm/smoothing.hpp"

using namespace reebmm;

namespace {

ScalarField noisy_height(const SimplicialComplex& X, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    const auto h = height_field(X);
    std::vector<double> v(h.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = h[i] + u(rng);
    return ScalarField(std::move(v));
}

EmpiricalMeasure random_cloud(int dim, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(dim * n);
    for (auto& x : c) x = u(rng);
    return EmpiricalMeasure::uniform(dim, std::move(c));
}

}  // namespace

static void BM_ReebGraphTorus(benchmark::State& state) {
    const auto T = torus_mesh(static_cast<std::size_t>(state.range(0)));
    const auto f = noisy_height(T, 0.05, 1);
    for (auto _ : state) benchmark::DoNotOptimize(reeb_graph(T, f));
    state.SetComplexityN(static_cast<benchmark::IterationCount>(T.total_simplices()));
}
BENCHMARK(BM_ReebGraphTorus)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity();

static void BM_SmoothGlobalTorus(benchmark::State& state) {
    const auto T = torus_mesh(static_cast<std::size_t>(state.range(0)));
    const auto f = height_field(T);
    for (auto _ : state) benchmark::DoNotOptimize(smooth_global(T, f, 0.5));
}
BENCHMARK(BM_SmoothGlobalTorus)->Arg(8)->Arg(16)->Arg(32);

static void BM_DtmField(benchmark::State& state) {
    const auto T = torus_mesh(16);
    const auto mu = random_cloud(3, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(dtm_field(T, mu, 0.1, 1e-6));
}
BENCHMARK(BM_DtmField)->Arg(16)->Arg(64)->Arg(256);

static void BM_Wasserstein2(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto mu = random_cloud(2, n, 3);
    const auto nu = random_cloud(2, n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein2(mu, nu));
}
BENCHMARK(BM_Wasserstein2)->Arg(8)->Arg(32)->Arg(64);

static void BM_ExtendedPersistence(benchmark::State& state) {
    const auto T = torus_mesh(32);
    const auto g = reeb_graph(T, noisy_height(T, static_cast<double>(state.range(0)) / 100.0, 5));
    for (auto _ : state) benchmark::DoNotOptimize(extended_persistence(g));
    state.counters["nodes"] = static_cast<double>(g.num_nodes());
}
BENCHMARK(BM_ExtendedPersistence)->Arg(5)->Arg(20)->Arg(50);

static void BM_Bottleneck(benchmark::State& state) {
    const auto T = torus_mesh(16);
    const auto a = extended_persistence(reeb_graph(T, noisy_height(T, 0.1, 6)));
    const auto b = extended_persistence(reeb_graph(T, noisy_height(T, 0.1, 7)));
    for (auto _ : state) benchmark::DoNotOptimize(bottleneck(a, b, 4096));
    state.counters["points"] = static_cast<double>(a.size() + b.size());
}
BENCHMARK(BM_Bottleneck);

BENCHMARK_MAIN();
