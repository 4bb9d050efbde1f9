// SPDX-License-Identifier: Apache-2.0
// Serial reference kernels vs their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ddop/kernels.hpp"
#include "ddop/metrics.hpp"
#include "ddop/pulses.hpp"

namespace {

using ddop::cplx;
namespace k = ddop::kernels;

std::vector<cplx> noise(std::size_t n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

template <bool Parallel>
void BM_SumAbs2(benchmark::State& state) {
    const auto v = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Parallel ? k::parallel::sum_abs2(v) : k::serial::sum_abs2(v));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_PowerMoments(benchmark::State& state) {
    const auto v = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto m = Parallel ? k::parallel::power_moments(v, 0.0, 1e-3) : k::serial::power_moments(v, 0.0, 1e-3);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CosineSynthesis(benchmark::State& state) {
    std::vector<double> amps(8192, 1.0), times(static_cast<std::size_t>(state.range(0))), out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 1e-4 * static_cast<double>(i);
    for (auto _ : state) {
        if (Parallel) {
            k::parallel::cosine_synthesis(amps, 0.5, 1.0, times, out);
        } else {
            k::serial::cosine_synthesis(amps, 0.5, 1.0, times, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_MeasureDefaultDdop(benchmark::State& state) {
    const ddop::PulseSpec spec;
    const auto u = ddop::synthesize(spec);
    for (auto _ : state) benchmark::DoNotOptimize(ddop::measure_all(u, ddop::AnalysisBand::default_for(spec), 4));
}

}  // namespace

BENCHMARK(BM_SumAbs2<false>)->Name("sum_abs2/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_SumAbs2<true>)->Name("sum_abs2/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_PowerMoments<false>)->Name("power_moments/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_PowerMoments<true>)->Name("power_moments/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_CosineSynthesis<false>)->Name("cosine_synthesis/serial")->Arg(256);
BENCHMARK(BM_CosineSynthesis<true>)->Name("cosine_synthesis/parallel")->Arg(256);
BENCHMARK(BM_MeasureDefaultDdop)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
