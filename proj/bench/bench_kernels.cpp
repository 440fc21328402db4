// Serial reference vs OpenMP kernels. Compare the *_Serial and *_Parallel rows.

#include <benchmark/benchmark.h>

#include <random>

#include "gapinterp/kernels.hpp"
#include "gapinterp/oracle.hpp"
#include "gapinterp/patterns.hpp"

using namespace gapinterp;

namespace {

std::vector<int> gap_indices(int n) {
    std::vector<int> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i % 2 ? -3 * i : 2 * i;
    return t;
}

std::vector<cplx> coeffs(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<cplx> c(n);
    for (auto& z : c) z = {nd(rng), nd(rng)};
    return c;
}

template <bool Parallel>
void TrigSum(benchmark::State& state) {
    const auto t = gap_indices(static_cast<int>(state.range(1)));
    const auto c = coeffs(t.size());
    const auto G = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto y = Parallel ? kernels::trig_sum(t, c, G) : kernels::serial::trig_sum(t, c, G);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(G * t.size()));
}

template <bool Parallel>
void WeightedEnergy(benchmark::State& state) {
    const auto G = static_cast<std::size_t>(state.range(0));
    const auto x = coeffs(G);
    const std::vector<double> w(G, 1.5);
    for (auto _ : state) {
        double e = Parallel ? kernels::weighted_energy(x, w) : kernels::serial::weighted_energy(x, w);
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(G));
}

template <bool Parallel>
void ReplicateErrors(benchmark::State& state) {
    const auto f = SpectralDensity(RationalAR{{0.6, -0.3}, 1.0});
    const std::size_t length = 128;
    const auto gen = oracle::path_generator(f, length);
    const kernels::PathFunctional target{{60, 61, 64}, {1.0, 1.0, 1.0}};
    const kernels::PathFunctional estimate{{59, 62, 63, 65}, {0.3, 0.4, 0.4, 0.3}};
    std::vector<double> out(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if (Parallel) {
            kernels::replicate_sq_errors(gen, length, target, estimate, 9, out);
        } else {
            kernels::serial::replicate_sq_errors(gen, length, target, estimate, 9, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(TrigSum<false>)->Name("TrigSum_Serial")->Args({4096, 16})->Args({4096, 256})->Args({16384, 256});
BENCHMARK(TrigSum<true>)->Name("TrigSum_Parallel")->Args({4096, 16})->Args({4096, 256})->Args({16384, 256});
BENCHMARK(WeightedEnergy<false>)->Name("WeightedEnergy_Serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(WeightedEnergy<true>)->Name("WeightedEnergy_Parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(ReplicateErrors<false>)->Name("ReplicateErrors_Serial")->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(ReplicateErrors<true>)->Name("ReplicateErrors_Parallel")->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
