#include <benchmark/benchmark.h>

#include "biphoton/biphoton.hpp"

using namespace biphoton;

namespace {

const WaveguideDispersion kSource = WaveguideDispersion::bragg_waveguide();
const SpectralFilter kFilter = SpectralFilter::telecom_bandpass();

void BM_BuildJsa(benchmark::State& state) {
    const auto grid = SpectralGrid::covering(kFilter, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_jsa(kSource, kFilter, grid));
}
BENCHMARK(BM_BuildJsa)->Arg(2049)->Arg(8193);

void BM_OverlapAtDelay(benchmark::State& state) {
    const auto jsa = build_jsa(kSource, kFilter, SpectralGrid::covering(kFilter));
    const DelayResponse response(jsa);
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(response.at(tau));
        tau += 1e-17;
    }
}
BENCHMARK(BM_OverlapAtDelay);

void BM_OptimalDelay(benchmark::State& state) {
    const auto jsa = build_jsa(kSource, kFilter, SpectralGrid::covering(kFilter, static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(optimal_delay(jsa));
    state.SetLabel("4001 delays");
}
BENCHMARK(BM_OptimalDelay)->Arg(2049)->Arg(8193)->Unit(benchmark::kMillisecond);

void BM_Concurrence(benchmark::State& state) {
    const auto s = x_state(0.98, 0.91);
    for (auto _ : state) benchmark::DoNotOptimize(concurrence(s));
}
BENCHMARK(BM_Concurrence);

void BM_ChshS(benchmark::State& state) {
    const auto s = x_state(0.98, 0.91);
    const auto set = ChshSettings::canonical(units::deg(22.5));
    for (auto _ : state) benchmark::DoNotOptimize(chsh_S(s, set));
}
BENCHMARK(BM_ChshS);

void BM_SimulateCountTable(benchmark::State& state) {
    const auto s = x_state(0.98, 0.91);
    const auto set = ChshSettings::canonical(units::deg(22.5));
    DetectorModel model;
    model.accidental_calibration = kCalibratedAccidentalAlpha;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_count_table(s, model, 6.0, set, 10.0, seed++));
}
BENCHMARK(BM_SimulateCountTable);

void BM_ChshFromCounts(benchmark::State& state) {
    const auto table = expected_count_table(x_state(0.98, 0.91), DetectorModel{}, 6.0,
                                            ChshSettings::canonical(units::deg(22.5)), 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(chsh_from_counts(table));
}
BENCHMARK(BM_ChshFromCounts);

}  // namespace
BENCHMARK_MAIN();
