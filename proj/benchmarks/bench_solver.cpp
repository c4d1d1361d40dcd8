#include "qvlasov/fields.hpp"
#include "qvlasov/observables.hpp"
#include "qvlasov/solver.hpp"

#include <benchmark/benchmark.h>

using namespace qvlasov;

namespace {

FieldConfig modulated(double M, double t_d_scale) {
    ModulatedFieldConfig c;
    c.M = M;
    c.t_d *= t_d_scale;
    return FieldConfig{c};
}

FieldConfig pulses(int N) {
    PulseTrainConfig c;
    c.omega_c = 0.631;
    c.N = N;
    return FieldConfig{c};
}

void BM_FieldTable(benchmark::State& state) {
    const auto cfg = modulated(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(Field(cfg).table_size());
}
BENCHMARK(BM_FieldTable)->Unit(benchmark::kMillisecond);

void BM_SolveModeModulated(benchmark::State& state) {
    const Field field(modulated(1.0, state.range(0) / 10.0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode(ModeKinematics{0.4}, field));
}
BENCHMARK(BM_SolveModeModulated)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SolveModePulseTrain(benchmark::State& state) {
    const Field field(pulses(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode(ModeKinematics{0.24}, field));
}
BENCHMARK(BM_SolveModePulseTrain)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SpectrumQuick(benchmark::State& state) {
    const Field field(modulated(0.0, 0.1));
    for (auto _ : state)
        benchmark::DoNotOptimize(momentum_spectrum(field, MomentumGrid{-1.0, 1.0, 41}).values.data());
}
BENCHMARK(BM_SpectrumQuick)->Unit(benchmark::kMillisecond);

void BM_DirectOracle(benchmark::State& state) {
    ModulatedFieldConfig c;
    c.E0 = 0.01;
    c.t_switch = 20.0;
    c.t_d = 150.0;
    const Field field{FieldConfig{c}};
    const ModeKinematics kin{0.2};
    const double step = 0.25 * max_direct_grid_step(kin, field);
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode_direct(kin, field, step));
}
BENCHMARK(BM_DirectOracle)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
