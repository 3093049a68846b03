#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "spaloha/analysis.hpp"
#include "spaloha/config.hpp"
#include "spaloha/csv.hpp"
#include "spaloha/engine.hpp"

namespace spaloha {

struct ReplicationResult {
  std::optional<DelayEstimate> delay;
  double mean_n = 0.0;  // post-warmup time average of N
  std::uint64_t departures = 0;  // post-warmup
  StationarityReport stationarity;
  RegenerationReport regeneration;
};

struct RunSummary {
  std::optional<DelayEstimate> delay;  // combined across replications
  double mean_n = 0.0;
  double littles = 0.0;
  StationarityVerdict verdict = StationarityVerdict::inconclusive;
  std::uint64_t n_departures = 0;
  std::vector<ReplicationResult> replications;
};

// Optional per-replication extra sink (e.g. CSV writers). Called from worker
// threads, one call per replication; the returned sink only sees that
// replication's slots.
using ReplicationSinkFactory =
    std::function<std::unique_ptr<TraceSink>(std::uint32_t replication)>;

// Runs config.replications independent replications on a pool of
// config.workers threads (0 = hardware concurrency). Replication k always
// consumes the stream seeded with substream_seed(config.seed, k), and
// results are assembled in replication order, so the worker count never
// changes any output.
RunSummary run_experiment(const ExperimentConfig& config,
                          const ReplicationSinkFactory& factory = nullptr);

SummaryRow make_summary_row(const ExperimentConfig& config,
                            const RunSummary& summary);

}  // namespace spaloha
