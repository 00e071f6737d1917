// Cost of one sweep cell for each metric on a 4-site Ising reservoir.

#include <benchmark/benchmark.h>

#include "kobs/experiments.hpp"

namespace {

const kobs::HermitianOperator& hamiltonian() {
  static const auto h = kobs::build_ising(4, 0.5, 1);
  return h;
}

void BM_KrylovLiouvillian(benchmark::State& state) {
  const auto z = kobs::parse_pauli_label("Z_1", 4);
  for (auto _ : state) benchmark::DoNotOptimize(kobs::krylov_space_liouvillian(hamiltonian(), z).grade());
}
BENCHMARK(BM_KrylovLiouvillian)->Unit(benchmark::kMillisecond);

void BM_ObservabilityModel(benchmark::State& state) {
  std::vector<kobs::HermitianOperator> obs{kobs::parse_pauli_label("Z_1", 4)};
  for (auto _ : state) benchmark::DoNotOptimize(kobs::ObservabilityModel(hamiltonian(), obs).grades());
}
BENCHMARK(BM_ObservabilityModel)->Unit(benchmark::kMillisecond);

void BM_ObservabilityCell(benchmark::State& state) {
  static const kobs::ObservabilityModel model(hamiltonian(), {kobs::parse_pauli_label("Z_1", 4)});
  const int v = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(20.0, v).total);
}
BENCHMARK(BM_ObservabilityCell)->Arg(10)->Arg(110)->Unit(benchmark::kMicrosecond);

void BM_ReservoirRun(benchmark::State& state) {
  kobs::ReservoirConfig rc;
  rc.coupling_seed = 1;
  rc.clock_cycle = 20.0;
  rc.multiplexing = static_cast<int>(state.range(0));
  const kobs::Propagator prop(hamiltonian());
  const auto inputs = kobs::draw_inputs(6200, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kobs::run_reservoir(prop, rc, inputs).values.sum());
}
BENCHMARK(BM_ReservoirRun)->Arg(10)->Arg(110)->Unit(benchmark::kMillisecond);

void BM_IpcCell(benchmark::State& state) {
  kobs::ReservoirConfig rc;
  rc.coupling_seed = 1;
  rc.clock_cycle = 20.0;
  rc.multiplexing = static_cast<int>(state.range(0));
  const kobs::Propagator prop(hamiltonian());
  const auto inputs = kobs::draw_inputs(6200, 1);
  for (auto _ : state) {
    const auto s = kobs::run_reservoir(prop, rc, inputs);
    benchmark::DoNotOptimize(kobs::total_ipc(s.values, inputs, 200).total);
  }
}
BENCHMARK(BM_IpcCell)->Arg(10)->Arg(110)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
