#include <benchmark/benchmark.h>

#include "shocklayer/jump.hpp"
#include "shocklayer/layer.hpp"
#include "shocklayer/pipeline.hpp"

using namespace shocklayer;

namespace {

LayerSystem mach2_system() {
    ModelParams p;
    p.M = 2.0;
    EosSpec eos;
    PlasmaState up;
    up.u = 2.0;
    up.T = 0.6;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    return LayerSystem(p, eos, c);
}

PlasmaState mid_state() {
    PlasmaState y;
    y.u = 1.4;
    y.v = 0.02;
    y.w = -0.01;
    y.B2 = 0.15;
    y.B3 = 0.05;
    y.zeta2 = 0.08;
    y.zeta3 = -0.03;
    y.T = 0.9;
    return y;
}

void BM_LayerRhs(benchmark::State& state) {
    const LayerSystem sys = mach2_system();
    const PlasmaState y = mid_state();
    for (auto _ : state) benchmark::DoNotOptimize(rhs(y, sys));
}
BENCHMARK(BM_LayerRhs);

void BM_LayerJacobian(benchmark::State& state) {
    const LayerSystem sys = mach2_system();
    const PlasmaState y = mid_state();
    for (auto _ : state) benchmark::DoNotOptimize(jacobian(y, sys));
}
BENCHMARK(BM_LayerJacobian);

void BM_RestPointSearch(benchmark::State& state) {
    ModelParams p;
    p.M = 2.0;
    EosSpec eos;
    PlasmaState up;
    up.u = 2.0;
    up.T = 0.6;
    const FluxConstants c = constants_from_upstream(up, p, eos);
    RestPointSearch search;
    search.n_u = 12;
    search.n_T = 12;
    search.extra_seeds.push_back(up);
    for (auto _ : state) benchmark::DoNotOptimize(find_rest_points(c, p, eos, search));
}
BENCHMARK(BM_RestPointSearch)->Unit(benchmark::kMillisecond);

void BM_Mach2Profile(benchmark::State& state) {
    ModelParams p;
    p.M = 2.0;
    EosSpec eos;
    PlasmaState up;
    up.u = 2.0;
    up.T = 0.6;
    RestPointSearch search;
    search.n_u = 12;
    search.n_T = 12;
    ProfileOptions popts;
    popts.output_samples = 2001;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_shock_profile(p, eos, up, search, popts));
}
BENCHMARK(BM_Mach2Profile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
