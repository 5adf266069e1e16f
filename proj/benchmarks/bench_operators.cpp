#include <benchmark/benchmark.h>

#include "fraclimit/kernels.hpp"
#include "fraclimit/operators.hpp"
#include "fraclimit/resolvent.hpp"

using namespace fraclimit;

namespace {

struct Model {
    Model() : eq(make_default_equilibrium(ModelParams{})), table(eq), ctx(eq, table) {}
    Equilibrium eq;
    KernelTable table;
    OperatorContext ctx;
};

Model& model() {
    static Model m;
    return m;
}

void BM_KernelTable(benchmark::State& state) {
    const Equilibrium eq = make_default_equilibrium(ModelParams{});
    for (auto _ : state) benchmark::DoNotOptimize(KernelTable(eq).nodes());
}
BENCHMARK(BM_KernelTable)->Unit(benchmark::kMillisecond);

void BM_Operator(benchmark::State& state, const char* op, double eps) {
    Model& m = model();
    const TestFunction psi = test_function_by_id("even_gauss", 1);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_operator(op, psi, vec1(1.3), m.ctx, eps, 0.5));
}
BENCHMARK_CAPTURE(BM_Operator, LSR, "LSR", 0.0)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Operator, LD, "LD", 0.0)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Operator, D2sm1, "D2sm1", 0.0)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Operator, LSR_eps, "LSR_eps", 0.05)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Operator, kappa_eps, "kappa_eps", 0.05)->Unit(benchmark::kMicrosecond);

void BM_Resolvent(benchmark::State& state) {
    Model& m = model();
    const TestFunction psi = gaussian_bump(vec1(2.0), 0.5);
    const Resolvent R(psi, m.ctx, 0.05, 0.5);
    double v = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(R(vec1(1.0), vec1(v)));
        v = v > 100 ? 0.01 : v * 1.7;
    }
}
BENCHMARK(BM_Resolvent)->Unit(benchmark::kMicrosecond);

}  // namespace
