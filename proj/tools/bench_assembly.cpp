// Benchmarks the Toeplitz assembly paths: the OpenMP production kernel
// against the serial reference, plus the raw 2-D node loop at small sizes.
#include <benchmark/benchmark.h>

#include "btq/toeplitz.hpp"

using namespace btq;

namespace {

QuantumSpace make_space(int p) {
  BuildOptions o;
  o.kinks_t = {2.25};
  const int N = static_cast<int>(std::ceil(1.2 * p)) + 32;
  return build_space(Geometry::bargmann(1.0), p, N, o);
}

void bench_mode(benchmark::State& state, AssemblyMode mode) {
  const int p = static_cast<int>(state.range(0));
  QuantumSpace sp = make_space(p);
  const Symbol f = symbols::bump(1.2, cplx(0.3, 0.1));
  for (auto _ : state) {
    OperatorMatrix T = assemble_toeplitz(sp, f, mode);
    benchmark::DoNotOptimize(T.M.data());
  }
  state.SetLabel("d=" + std::to_string(sp.d));
}

void BM_AssembleParallel(benchmark::State& state) { bench_mode(state, AssemblyMode::parallel); }
void BM_AssembleSerial(benchmark::State& state) { bench_mode(state, AssemblyMode::serial); }
void BM_AssembleDirect2D(benchmark::State& state) { bench_mode(state, AssemblyMode::direct2d); }

BENCHMARK(BM_AssembleParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleDirect2D)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
