// Serial reference vs OpenMP kernel timings.

#include <benchmark/benchmark.h>

#include "keller/lab.hpp"
#include "keller/regions.hpp"
#include "keller/rigidity.hpp"

using namespace keller;

namespace {

void probe(benchmark::State& st, bool parallel) {
    for (auto _ : st) {
        const ProbeReport r = parallel ? nonexistence_probe(RaClass::ii, 4, 64, 1)
                                       : nonexistence_probe_serial(RaClass::ii, 4, 64, 1);
        benchmark::DoNotOptimize(r.counterexamples);
    }
}

void grid(benchmark::State& st, bool parallel) {
    EnclosureSpec s = default_spec(Theorem::T2_8, 1.0, 0.6);
    s.n = 3;
    s.gamma = 2.0;
    const GridSpec g{{-3, 3, -3, 3}, 400, 400};
    for (auto _ : st) {
        const auto cells = parallel ? membership_grid(s, g) : membership_grid_serial(s, g);
        benchmark::DoNotOptimize(cells.data());
    }
}

void sweep(benchmark::State& st, bool parallel) {
    GridModel g;
    g.M = 128;
    g.L = 20.0;
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const ScalarProfile v = parse_profile("gaussian:amp=1,width=1", g);
    const auto zs = z_rectangle(-3, 3, 0.5, 3, 8, 4);
    for (auto _ : st) {
        const auto pts = parallel ? bs_norm_sweep(g, pot, v, 1.0, zs) : bs_norm_sweep_serial(g, pot, v, 1.0, zs);
        benchmark::DoNotOptimize(pts.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(probe, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(probe, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
