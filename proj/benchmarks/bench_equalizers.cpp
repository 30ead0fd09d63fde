// Compares the iterative matched-filter equalizer (O(T*P*M*N) per frame)
// against the per-symbol full MMSE (O(N*M^3)) across subcarrier counts.

#include "ddsp/channel.hpp"
#include "ddsp/equalization.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ddsp;

namespace {

struct Scenario {
    FrameConfig frame;
    PathList paths;
    ComplexGrid r{Matrix(), Domain::DelayTime};
};

Scenario make_scenario(int M, int N) {
    Scenario s;
    s.frame.M = M;
    s.frame.N = N;
    std::mt19937_64 rng(12345);
    const ChannelRealization ch = draw_channel(s.frame, 1000.0, rng);
    s.paths = ch.paths;
    Matrix x(M, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < M; ++i) x(i, j) = complex_gaussian(rng);
    s.r = add_noise(apply_channel(ComplexGrid(x, Domain::FreqTime), s.paths, s.frame),
                    NoiseConfig{1.0}, rng);
    return s;
}

void BM_imfc(benchmark::State& state) {
    const Scenario s = make_scenario(static_cast<int>(state.range(0)), 32);
    EqualizerConfig cfg;
    cfg.max_iters = 50;
    for (auto _ : state) benchmark::DoNotOptimize(imfc_landweber(s.r, s.paths, s.frame, cfg));
}

void BM_full_mmse(benchmark::State& state) {
    const Scenario s = make_scenario(static_cast<int>(state.range(0)), 32);
    for (auto _ : state) benchmark::DoNotOptimize(full_mmse(s.r, s.paths, s.frame, 31.6));
}

void BM_single_tap(benchmark::State& state) {
    const Scenario s = make_scenario(static_cast<int>(state.range(0)), 32);
    const Matrix h = tf_channel_matrix(s.paths, s.frame);
    const Matrix y = s.r.m;
    for (auto _ : state) benchmark::DoNotOptimize(single_tap_mmse(y, h, 31.6));
}

}  // namespace

BENCHMARK(BM_imfc)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_full_mmse)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_single_tap)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
