#include <benchmark/benchmark.h>

#include "spaloha/analysis.hpp"

using namespace spaloha;

namespace {

void BM_ChainOracle(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  const auto n_max = static_cast<std::uint32_t>(state.range(1));
  const ArrivalDistribution dist = ArrivalDistribution::poisson(lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_oracle(dist, 1.0, n_max));
  }
}

}  // namespace

BENCHMARK(BM_ChainOracle)->Args({1, 256})->Args({10, 1024})->Args({50, 3000});
