#include <benchmark/benchmark.h>

#include <vector>

#include "diracdfb/green.hpp"
#include "diracdfb/spectral.hpp"
#include "diracdfb/transfer_matrix.hpp"
#include "diracdfb/types.hpp"

namespace {

using namespace diracdfb;

StructureSpec eight_segment_structure() {
  std::vector<Segment> segs;
  for (int i = 0; i < 8; ++i) {
    Segment s;
    s.length = 0.125;
    s.mass = 1.0 + 0.25 * i;
    s.gain = (i % 2 == 0) ? -1.0 : 1.0;
    s.detuning = 0.1 * i;
    segs.push_back(s);
  }
  return StructureSpec(segs);
}

void BM_segment_matrix(benchmark::State& state) {
  Segment s;
  s.length = 1.0;
  s.mass = 1.0;
  s.gain = -1.5;
  const Energy E(2.5, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(segment_matrix(s, E));
  }
}
BENCHMARK(BM_segment_matrix);

void BM_structure_matrix_8seg(benchmark::State& state) {
  const StructureSpec spec = eight_segment_structure();
  const Energy E(2.5, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_matrix(spec, E));
  }
}
BENCHMARK(BM_structure_matrix_8seg);

void BM_ode_oracle_500(benchmark::State& state) {
  const StructureSpec spec = make_uniform_gain_structure(1.0, 1.5);
  const Energy E(2.5, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ode_oracle_matrix(spec, E, 500));
  }
}
BENCHMARK(BM_ode_oracle_500);

void BM_green_eval(benchmark::State& state) {
  const StructureSpec spec = make_uniform_gain_structure(1.0, 1.5);
  const Energy E(2.5, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_eval(spec, E, -0.2, 0.3));
  }
}
BENCHMARK(BM_green_eval);

void BM_find_zeros_one_cell(benchmark::State& state) {
  const StructureSpec spec = make_uniform_gain_structure(1.0, 0.0);
  const Window window{2.0, 4.0, -3.0, -1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_zeros(spec, MatrixEntry::M22, window));
  }
}
BENCHMARK(BM_find_zeros_one_cell);

}  // namespace

BENCHMARK_MAIN();
