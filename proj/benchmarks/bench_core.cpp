#include <benchmark/benchmark.h>

#include "envtool/creative.hpp"
#include "envtool/discriminant.hpp"
#include "envtool/envelope.hpp"
#include "envtool/fixtures.hpp"

using namespace envtool;

namespace {

SphereFamily fam(const char* name) { return makeFamily(*findFixture(name)); }

void BM_ExprJet2(benchmark::State& state) {
    const Expr e = Expr::parse("sqrt(9*u^2+4)*sin(u*v)/(1+v^2)");
    double u = 0.3, v = 0.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.jet2(u, v));
        u += 1e-9;
    }
}
BENCHMARK(BM_ExprJet2);

void BM_BasicInvariants(benchmark::State& state) {
    const SphereFamily f = fam("sphere-through-origin");
    double u = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(basicInvariants(f.fs, u, 1.2));
        u += 1e-9;
    }
}
BENCHMARK(BM_BasicInvariants);

void BM_SolveCreator(benchmark::State& state) {
    const SphereFamily f = fam("sphere-through-origin");
    double u = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solveCreatorAt(f, u, 1.2));
        u += 1e-9;
    }
}
BENCHMARK(BM_SolveCreator);

void BM_EnvelopePoint(benchmark::State& state) {
    const SphereFamily f = fam("parabolic-cylinder");
    double u = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(envelopeAt(f, u, 0.4, Branch::plusGamma()));
        u += 1e-9;
    }
}
BENCHMARK(BM_EnvelopePoint);

void BM_ClassifyGrid(benchmark::State& state) {
    const SphereFamily f = fam("parabolic-cylinder");
    const GridSpec grid{static_cast<std::size_t>(state.range(0)),
                        static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(classifyGrid(f, grid));
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_ClassifyGrid)->Arg(21)->Arg(41)->Arg(101);

void BM_DecomposeD(benchmark::State& state) {
    const SphereFamily f = fam("axis-half");
    for (auto _ : state) benchmark::DoNotOptimize(decomposeD(f, GridSpec{21, 21}, 32));
}
BENCHMARK(BM_DecomposeD);

}  // namespace

BENCHMARK_MAIN();
