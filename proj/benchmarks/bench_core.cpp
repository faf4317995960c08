#include <benchmark/benchmark.h>

#include "lorcross/besov.hpp"
#include "lorcross/io.hpp"
#include "lorcross/norms.hpp"
#include "lorcross/rearrange.hpp"

using namespace lorcross;

namespace {

GridFunction sample_1d() {
    return make_from_generator("gen:random-bandlimited:1:8", 1, {4096, 1, 1});
}

GridFunction sample_2d() {
    return make_from_generator("gen:random-bandlimited:2:5", 2, {128, 128, 1});
}

void bm_analyze_1d(benchmark::State& state) {
    GridFunction f = sample_1d();
    for (auto _ : state) benchmark::DoNotOptimize(analyze(f));
}
BENCHMARK(bm_analyze_1d);

void bm_analyze_2d(benchmark::State& state) {
    GridFunction f = sample_2d();
    for (auto _ : state) benchmark::DoNotOptimize(analyze(f));
}
BENCHMARK(bm_analyze_2d);

void bm_iterated_rearrangement(benchmark::State& state) {
    GridFunction f = sample_2d();
    for (auto _ : state) benchmark::DoNotOptimize(iterated_rearrangement(f));
}
BENCHMARK(bm_iterated_rearrangement);

void bm_lorentz_norm_aniso(benchmark::State& state) {
    GridFunction f = sample_2d();
    LorentzParams p = LorentzParams::uniform(PhiFunction::power(0.55), 2.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(lorentz_norm_aniso(f, p));
}
BENCHMARK(bm_lorentz_norm_aniso);

void bm_block_decomposition(benchmark::State& state) {
    SpectralFunction F = analyze(sample_2d());
    for (auto _ : state) {
        double acc = 0.0;
        for (int s2 = 0; s2 <= max_block_index(128); ++s2)
            for (int s1 = 0; s1 <= max_block_index(128); ++s1) {
                std::array<int, 2> s{s1, s2};
                SpectralFunction B = block_spectrum(F, s);
                for (const cplx& c : B.coeff) acc += std::norm(c);
            }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bm_block_decomposition);

void bm_maximal_average(benchmark::State& state) {
    GridFunction f = sample_2d();
    std::array<double, 3> t{0.125, 0.25, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(maximal_average(f, t));
}
BENCHMARK(bm_maximal_average);

void bm_besov_seminorm(benchmark::State& state) {
    GridFunction f = synthesize(zero_mean_project(analyze(sample_2d())));
    BesovParams bp;
    bp.space = LorentzParams::uniform(PhiFunction::power(0.7), 2.0, 2);
    bp.r = {0.5, 0.5};
    bp.theta = {2.0, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(besov_seminorm(f, bp));
}
BENCHMARK(bm_besov_seminorm);

}  // namespace

BENCHMARK_MAIN();
