#include <benchmark/benchmark.h>

#include "fraclimit/galerkin.hpp"
#include "fraclimit/kinetic.hpp"
#include "fraclimit/reference.hpp"

using namespace fraclimit;

namespace {

void BM_Assemble(benchmark::State& state) {
    ModelParams p;
    p.alpha = 0.5;
    const Equilibrium eq = make_default_equilibrium(p);
    const Mesh1D mesh = Mesh1D::graded(16.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, eq.params(), eq).A_SR.sum());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assemble)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Evolve(benchmark::State& state) {
    ModelParams p;
    p.alpha = 0.5;
    const Equilibrium eq = make_default_equilibrium(p);
    const AssembledForms F = assemble(Mesh1D::graded(16.0, 240), eq.params(), eq);
    const Eigen::VectorXd u0 = project(F, [](double x) { return std::exp(-2 * (x - 2) * (x - 2)); });
    for (auto _ : state) benchmark::DoNotOptimize(evolve(F, u0, 0.5, 0.005, 0.5).back().sum());
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

void BM_ReferenceSpecular(benchmark::State& state) {
    const Equilibrium eq = make_default_equilibrium(ModelParams{});
    const InitialProfile prof = gaussian_profile(vec1(2.0), 0.5);
    const GridSpec grid = uniform_grid_1d(0.0, 8.0, 80);
    ReferenceOptions opt;
    opt.dx = 1.0 / state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(reference_specular(prof, 0.5, eq.params(), grid, opt).values[0]);
}
BENCHMARK(BM_ReferenceSpecular)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
