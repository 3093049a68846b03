#include "spaloha/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "spaloha/geometry.hpp"
#include "spaloha/protocols.hpp"
#include "spaloha/random.hpp"

namespace spaloha {

namespace {

class DelayAccumulator final : public TraceSink {
 public:
  DelayAccumulator(std::uint64_t warmup, std::uint32_t batches)
      : warmup_(warmup), batches_(batches) {}

  void on_slot(const SlotTrace& trace) override {
    if (trace.slot < warmup_) return;
    for (const Departure& d : trace.departures) {
      delays_.push_back(static_cast<std::uint32_t>(trace.slot - d.arrival_slot));
    }
  }

  std::optional<DelayEstimate> estimate() const {
    return estimate_from_delays(delays_, warmup_, batches_);
  }
  std::uint64_t count() const { return delays_.size(); }

 private:
  std::uint64_t warmup_;
  std::uint32_t batches_;
  std::vector<std::uint32_t> delays_;
};

class MeanNAccumulator final : public TraceSink {
 public:
  explicit MeanNAccumulator(std::uint64_t warmup) : warmup_(warmup) {}

  void on_slot(const SlotTrace& trace) override {
    if (trace.slot < warmup_) return;
    sum_ += static_cast<double>(trace.n_before);
    ++slots_;
  }

  double mean() const {
    return slots_ == 0 ? 0.0 : sum_ / static_cast<double>(slots_);
  }

 private:
  std::uint64_t warmup_;
  double sum_ = 0.0;
  std::uint64_t slots_ = 0;
};

class StationaritySink final : public TraceSink {
 public:
  StationaritySink(std::uint64_t horizon, std::uint64_t warmup)
      : acc_(horizon, warmup) {}
  void on_slot(const SlotTrace& trace) override { acc_.on_slot(trace); }
  StationarityReport report() const { return acc_.finish(); }

 private:
  StationarityAccumulator acc_;
};

class RegenerationSink final : public TraceSink {
 public:
  explicit RegenerationSink(const RegenerationParams& params) : acc_(params) {}
  void on_slot(const SlotTrace& trace) override { acc_.on_slot(trace); }
  RegenerationReport report() const { return acc_.finish(); }

 private:
  RegenerationAccumulator acc_;
};

// Theorem-style q = a^M b^M is defined for class A1 with c in (0, 1] and
// r > 0; other runs still report cycles and gamma blocks with M = 1, q = 0.
RegenerationParams regeneration_params(const ExperimentConfig& config) {
  RegenerationParams params{0.0, 0.0, 1};
  if (config.protocol.kind == ProtocolKind::a1 && config.protocol.a1_c > 0.0 &&
      config.protocol.a1_c <= 1.0 && config.r > 0.0) {
    params.a = config.arrival.prob_zero();
    params.b = b_min(config.protocol.a1_c);
    params.m =
        static_cast<std::uint32_t>(partition_sphere(config.r).size());
  }
  return params;
}

ReplicationResult run_one(const ExperimentConfig& config,
                          const RegenerationParams& regen_params,
                          std::uint32_t replication,
                          const ReplicationSinkFactory& factory) {
  Rng rng(substream_seed(config.seed, replication));

  DelayAccumulator delays(config.warmup_slots(), config.batches);
  MeanNAccumulator mean_n(config.warmup_slots());
  StationaritySink stationarity(config.horizon, config.warmup_slots());
  RegenerationSink regeneration(regen_params);

  CompositeSink composite;
  composite.add(&delays);
  composite.add(&mean_n);
  composite.add(&stationarity);
  composite.add(&regeneration);
  std::unique_ptr<TraceSink> extra;
  if (factory) {
    extra = factory(replication);
    if (extra) composite.add(extra.get());
  }

  run(config, rng, composite);

  ReplicationResult result;
  result.delay = delays.estimate();
  result.mean_n = mean_n.mean();
  result.departures = delays.count();
  result.stationarity = stationarity.report();
  result.regeneration = regeneration.report();
  return result;
}

StationarityVerdict majority_verdict(
    const std::vector<ReplicationResult>& results) {
  std::size_t stable = 0;
  std::size_t unstable = 0;
  for (const ReplicationResult& r : results) {
    if (r.stationarity.verdict == StationarityVerdict::stable_evidence) {
      ++stable;
    } else if (r.stationarity.verdict ==
               StationarityVerdict::unstable_evidence) {
      ++unstable;
    }
  }
  if (2 * stable > results.size()) return StationarityVerdict::stable_evidence;
  if (2 * unstable > results.size()) {
    return StationarityVerdict::unstable_evidence;
  }
  return StationarityVerdict::inconclusive;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config,
                          const ReplicationSinkFactory& factory) {
  config.validate();
  const RegenerationParams regen_params = regeneration_params(config);

  const std::uint32_t n = config.replications;
  std::vector<ReplicationResult> results(n);

  std::uint32_t workers =
      config.workers > 0 ? config.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, n);

  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::uint32_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = run_one(config, regen_params, i, factory);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  RunSummary summary;
  summary.replications = std::move(results);

  std::vector<std::optional<DelayEstimate>> estimates;
  estimates.reserve(n);
  double mean_n_sum = 0.0;
  for (const ReplicationResult& r : summary.replications) {
    estimates.push_back(r.delay);
    mean_n_sum += r.mean_n;
    summary.n_departures += r.departures;
  }
  summary.delay = combine_replications(estimates);
  summary.mean_n = mean_n_sum / static_cast<double>(n);
  summary.littles =
      summary.delay
          ? littles_discrepancy(summary.mean_n, config.arrival.mean(),
                                summary.delay->mean_delay)
          : std::numeric_limits<double>::quiet_NaN();
  summary.verdict = majority_verdict(summary.replications);
  return summary;
}

SummaryRow make_summary_row(const ExperimentConfig& config,
                            const RunSummary& summary) {
  SummaryRow row;
  row.lambda = config.arrival.mean();
  row.r = config.r;
  row.s_r = config.r > 0.0 ? cap_area(config.r) : 0.0;
  row.protocol = make_protocol(config.protocol)->describe();
  row.delay = summary.delay;
  row.mean_n = summary.mean_n;
  row.littles = summary.littles;
  row.bound = config.r > 0.0 ? conjecture_bound(config.r)
                             : std::numeric_limits<double>::infinity();
  row.verdict = verdict_name(summary.verdict);
  row.n_departures = summary.n_departures;
  row.horizon = config.horizon;
  row.replications = config.replications;
  row.seed = config.seed;
  return row;
}

}  // namespace spaloha
