#include <benchmark/benchmark.h>

#include "betamix/kernels.hpp"
#include "betamix/mixing.hpp"
#include "betamix/random_instances.hpp"
#include "betamix/rng.hpp"

using namespace betamix;

namespace {

SetFunction table_of_size(int m) {
    SplitMix64 rng(100 + static_cast<std::uint64_t>(m));
    return random_set_function(rng, Region::full(m));
}

}  // namespace

static void BM_LowerSumDirect(benchmark::State& state) {
    const SetFunction f = table_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SetFunction out = lower_sum(f);
        benchmark::DoNotOptimize(out.values().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LowerSumDirect)->DenseRange(8, 16, 4)->Complexity();

static void BM_LowerSumFast(benchmark::State& state) {
    const SetFunction f = table_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SetFunction out = lower_sum_fast(f);
        benchmark::DoNotOptimize(out.values().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LowerSumFast)->DenseRange(8, 16, 4)->Complexity();

static void BM_LowerDifferenceDirect(benchmark::State& state) {
    const SetFunction f = table_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SetFunction out = lower_difference(f);
        benchmark::DoNotOptimize(out.values().data());
    }
}
BENCHMARK(BM_LowerDifferenceDirect)->DenseRange(8, 14, 2);

static void BM_DppLawMobius(benchmark::State& state) {
    SplitMix64 rng(7);
    const DiscreteDPP dpp =
        random_dpp(rng, static_cast<int>(state.range(0)), 0.0, 0.9);
    for (auto _ : state) {
        FiniteProcess p = dpp_to_process(dpp, DppLawPath::mobius);
        benchmark::DoNotOptimize(p.law().data());
    }
}
BENCHMARK(BM_DppLawMobius)->DenseRange(8, 12, 2);

static void BM_DppLawLEnsemble(benchmark::State& state) {
    SplitMix64 rng(7);
    const DiscreteDPP dpp =
        random_dpp(rng, static_cast<int>(state.range(0)), 0.0, 0.9);
    for (auto _ : state) {
        FiniteProcess p = dpp_to_process(dpp, DppLawPath::l_ensemble);
        benchmark::DoNotOptimize(p.law().data());
    }
}
BENCHMARK(BM_DppLawLEnsemble)->DenseRange(8, 12, 2);

static void BM_BetaExact(benchmark::State& state) {
    SplitMix64 rng(8);
    const FiniteProcess process =
        random_process(rng, static_cast<int>(state.range(0)));
    const Region a = Region::of({0, 1, 2});
    const Region b = Region::of({3, 4});
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_exact(process, a, b));
    }
}
BENCHMARK(BM_BetaExact)->DenseRange(8, 12, 2);

static void BM_Theorem1Bound(benchmark::State& state) {
    SplitMix64 rng(9);
    const FiniteProcess process =
        random_process(rng, static_cast<int>(state.range(0)));
    const CorrelationOracle oracle = correlations_of(process);
    const Region a = Region::of({0, 1, 2});
    const Region b = Region::of({3, 4});
    for (auto _ : state) {
        benchmark::DoNotOptimize(theorem1_bound(oracle, a, b));
    }
}
BENCHMARK(BM_Theorem1Bound)->DenseRange(8, 12, 2);

static void BM_Sweep(benchmark::State& state) {
    SplitMix64 rng(10);
    const DiscreteDPP dpp =
        random_dpp(rng, static_cast<int>(state.range(0)), 0.0, 0.9);
    for (auto _ : state) {
        MixingReport rep = beta_pq_r_sweep(dpp, 2.0, 2.0, 0.0);
        benchmark::DoNotOptimize(rep.beta_exact);
    }
}
BENCHMARK(BM_Sweep)->DenseRange(6, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_L2CrossMass(benchmark::State& state) {
    const IsotropicKernel gauss(KernelFamily::gaussian, 1.0, 1.0, 0.0, 1);
    const Box a{{0.0}, {1.0}};
    const Box b{{3.0}, {4.0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            l2_cross_mass(gauss, a, b, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_L2CrossMass)->RangeMultiplier(2)->Range(8, 64);

static void BM_OmegaBessel(benchmark::State& state) {
    const IsotropicKernel bessel(KernelFamily::bessel, 1.0, 1.0, 1.5, 1);
    double r = 5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel.omega(r));
        r = r < 50.0 ? r + 0.1 : 5.0;
    }
}
BENCHMARK(BM_OmegaBessel);

BENCHMARK_MAIN();
