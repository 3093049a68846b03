#include <benchmark/benchmark.h>

#include "spaloha/config.hpp"
#include "spaloha/engine.hpp"
#include "spaloha/random.hpp"

using namespace spaloha;

namespace {

class NullSink final : public TraceSink {
 public:
  void on_slot(const SlotTrace&) override {}
};

void BM_RunSlots(benchmark::State& state, ProtocolKind kind, double lambda,
                 double r) {
  ExperimentConfig config;
  config.protocol.kind = kind;
  config.arrival = ArrivalDistribution::poisson(lambda);
  config.r = r;
  config.horizon = static_cast<std::uint64_t>(state.range(0));
  NullSink sink;
  for (auto _ : state) {
    Rng rng(1);
    run(config, rng, sink);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(config.horizon));
}

void BM_NeighbourScan(benchmark::State& state) {
  Rng rng(2);
  MessageSet messages;
  const std::int64_t n = state.range(0);
  for (std::int64_t i = 0; i < n; ++i) {
    messages.add(sample_uniform(rng), 0, static_cast<std::uint64_t>(i));
  }
  std::size_t center = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(neighbours_within(messages, center, 0.2));
    center = (center + 1) % messages.size();
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_DrawBinomial(benchmark::State& state) {
  Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  const double p = 1.0 / static_cast<double>(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_binomial(n, p, rng));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_RunSlots, a1_spatial, ProtocolKind::a1, 5.0, 0.2)
    ->Arg(20000);
BENCHMARK_CAPTURE(BM_RunSlots, a1_full_clear, ProtocolKind::a1, 5.0,
                  kSphereDiameter)
    ->Arg(20000);
BENCHMARK_CAPTURE(BM_RunSlots, a2_spatial, ProtocolKind::a2, 1.0, 0.2)
    ->Arg(20000);
BENCHMARK_CAPTURE(BM_RunSlots, a3_spatial, ProtocolKind::a3, 1.0, 0.2)
    ->Arg(20000);
BENCHMARK(BM_NeighbourScan)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_DrawBinomial)->Arg(10)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
