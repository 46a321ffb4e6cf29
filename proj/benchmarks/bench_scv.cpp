#include <benchmark/benchmark.h>

#include "scv/bessel.hpp"
#include "scv/forms.hpp"
#include "scv/kloosterman.hpp"
#include "scv/poincare.hpp"
#include "scv/shiftconv.hpp"

using namespace scv;

static void BM_EtaPowerTable(benchmark::State& state) {
    long nmax = state.range(0);
    for (auto _ : state) {
        auto t = eta_power_table(24, 1, nmax);
        benchmark::DoNotOptimize(t.data());
    }
    state.SetComplexityN(nmax);
}
BENCHMARK(BM_EtaPowerTable)->Arg(10000)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_Kloosterman(benchmark::State& state) {
    long c = state.range(0);
    for (auto _ : state) {
        clear_kloosterman_cache();
        benchmark::DoNotOptimize(kloosterman(1, 1, c));
    }
}
BENCHMARK(BM_Kloosterman)->Arg(997)->Arg(9973)->Arg(99991);

static void BM_BesselJ(benchmark::State& state) {
    double x = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_j(11, x, 1e-12));
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(12)->Arg(50);

static void BM_BesselI(benchmark::State& state) {
    double x = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_i(11, x, 1e-12));
}
BENCHMARK(BM_BesselI)->Arg(1)->Arg(12)->Arg(50);

static void BM_PeterssonBeta(benchmark::State& state) {
    PoincareSpec spec{1, int(state.range(0)), state.range(1), {}};
    for (auto _ : state) {
        clear_kloosterman_cache();
        benchmark::DoNotOptimize(petersson_beta(spec).value);
    }
}
BENCHMARK(BM_PeterssonBeta)->Args({12, 1})->Args({4, 9})->Unit(benchmark::kMillisecond);

static void BM_DhatSum(benchmark::State& state) {
    long terms = state.range(0);
    static CoefficientTable table = build_table(FormSpec::eta(24, 1), 1000004);
    ConvolutionRequest req;
    req.f1 = &table;
    req.f2 = &table;
    req.h = 1;
    req.terms = terms;
    req.control.tol = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(dhat(req).value);
    state.SetItemsProcessed(int64_t(state.iterations()) * terms);
}
BENCHMARK(BM_DhatSum)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
