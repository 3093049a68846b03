#include <benchmark/benchmark.h>

#include "spaloha/geometry.hpp"
#include "spaloha/random.hpp"

using namespace spaloha;

namespace {

void BM_SampleUniform(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_uniform(rng));
  }
}

void BM_PartitionSphere(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition_sphere(r));
  }
}

void BM_LocateCell(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 100.0;
  const auto cells = partition_sphere(r);
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(locate_cell(sample_uniform(rng), cells));
  }
}

}  // namespace

BENCHMARK(BM_SampleUniform);
BENCHMARK(BM_PartitionSphere)->Arg(10)->Arg(30);
BENCHMARK(BM_LocateCell)->Arg(10)->Arg(30);
