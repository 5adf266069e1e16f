#include <benchmark/benchmark.h>

#include "fraclimit/kinetic.hpp"

using namespace fraclimit;

namespace {

ModelParams params(double eps, double alpha) {
    ModelParams p;
    p.s = 0.75;
    p.eps = eps;
    p.alpha = alpha;
    return p;
}

void BM_SampleVelocity(benchmark::State& state) {
    const Equilibrium eq = make_default_equilibrium(params(0.1, 0.0));
    RandomStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(eq.sample_velocity(rng));
}
BENCHMARK(BM_SampleVelocity);

void BM_SampleDiffuseVelocity(benchmark::State& state) {
    const Equilibrium eq = make_default_equilibrium(params(0.1, 1.0));
    RandomStream rng(1, 0);
    const Vec n = vec1(-1.0);
    for (auto _ : state) benchmark::DoNotOptimize(eq.sample_diffuse_velocity(n, rng));
}
BENCHMARK(BM_SampleDiffuseVelocity);

// Particles per second over a full run to t = 0.5.
void BM_KineticRun(benchmark::State& state) {
    const double eps = state.range(0) / 1000.0;
    const double alpha = state.range(1) / 10.0;
    const std::size_t n = 20000;
    const Equilibrium eq = make_default_equilibrium(params(eps, alpha));
    const InitialProfile prof = gaussian_profile(vec1(2.0), 0.5);
    const GridSpec grid = uniform_grid_1d(0.0, 8.0, 80);
    for (auto _ : state) {
        ParticleEnsemble ens = init_ensemble(prof, n, eq.params(), eq, 7);
        benchmark::DoNotOptimize(run(ens, eq, 0.5, {0.5}, grid));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(BM_KineticRun)->Args({200, 0})->Args({50, 0})->Args({50, 10})->Unit(benchmark::kMillisecond);

}  // namespace
