#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spaloha/engine.hpp"
#include "spaloha/stats.hpp"
#include "spaloha/traffic.hpp"

namespace spaloha {

// ---------------------------------------------------------------------------
// Mean sojourn time estimation (batch means).

struct DepartureEvent {
  std::uint64_t message_id = 0;
  std::uint64_t arrival_slot = 0;
  std::uint64_t departure_slot = 0;

  std::uint64_t delay() const { return departure_slot - arrival_slot; }
};

struct DelayEstimate {
  double mean_delay = 0.0;
  double half_width = 0.0;  // 95%, Student-t
  std::uint64_t n_departures = 0;
  std::uint64_t warmup_slots = 0;
  std::uint32_t batch_count = 0;
};

// Batch-means estimate over departures with departure_slot >= warmup_slots.
// Inconclusive (nullopt) below 10 departures per batch; never a silent
// low-sample estimate.
std::optional<DelayEstimate> estimate_mean_delay(
    std::span<const DepartureEvent> departures, std::uint64_t warmup_slots,
    std::uint32_t batches);

// Same estimator when the post-warmup delays are already extracted, in
// departure order.
std::optional<DelayEstimate> estimate_from_delays(
    std::span<const std::uint32_t> delays, std::uint64_t warmup_slots,
    std::uint32_t batches);

// Combines per-replication estimates: equal-weight mean with a Student-t
// interval across replications. Inconclusive unless every input is.
std::optional<DelayEstimate> combine_replications(
    std::span<const std::optional<DelayEstimate>> estimates);

// ---------------------------------------------------------------------------
// Little's law cross-check: |avg N - lambda * mean delay| / avg N.

double littles_discrepancy(double mean_n, double lambda, double mean_delay);

double littles_law_check(std::span<const SlotTrace> trace,
                         const DelayEstimate& estimate, double lambda);

// ---------------------------------------------------------------------------
// Regeneration detection and the geometric tail bound.

struct RegenerationParams {
  double a = 0.0;      // P(xi = 0)
  double b = 0.0;      // worst-case per-slot success chance
  std::uint32_t m = 1;  // partition cell count M
};

struct RegenerationReport {
  // Slots between successive empty-system epochs (N = 0 observed).
  std::vector<std::uint64_t> cycle_lengths;
  // First block index n >= 1 such that slots [nM, nM+M) all have no
  // arrivals and are each empty or a success; absent if never observed.
  std::vector<std::uint64_t> gamma_samples;
  double q_lower_bound = 0.0;  // a^M * b^M
};

// Streaming form; feed slots in order.
class RegenerationAccumulator {
 public:
  explicit RegenerationAccumulator(const RegenerationParams& params);
  void on_slot(const SlotTrace& trace);
  RegenerationReport finish() const;

 private:
  RegenerationParams params_;
  std::vector<std::uint64_t> empty_epochs_;
  std::optional<std::uint64_t> gamma_;
  bool block_ok_ = true;
};

RegenerationReport detect_regenerations(std::span<const SlotTrace> trace,
                                        const RegenerationParams& params);

// ---------------------------------------------------------------------------
// Exact oracle for the full-clear regime (r >= 2R): the population chain
// N' = xi on success (chance k p (1-p)^{k-1} with p = min(1, c/k)), else
// N' = N + xi, truncated at n_max with the excess folded into the top state.

struct ChainOracleResult {
  std::vector<double> stationary_pmf;  // states 0..n_max
  double mean_n = 0.0;
  double mean_delay_littles = 0.0;  // mean_n / E[xi]
  double truncation_mass = 0.0;     // stationary mass at the boundary state
  double balance_residual = 0.0;    // max_j |(pi P)_j - pi_j|
  bool reliable = false;            // truncation_mass below tolerance
  std::uint32_t iterations = 0;
};

ChainOracleResult chain_oracle(const ArrivalDistribution& arrival, double c,
                               std::uint32_t n_max,
                               double truncation_tol = 1e-8);

// ---------------------------------------------------------------------------
// Conjectured mean-delay ceiling e / S_r.

double conjecture_bound(double r);

// ---------------------------------------------------------------------------
// Stationarity evidence: thirds comparison plus a linear drift fit over
// batch means. Deliberately reports evidence, not proof.

enum class StationarityVerdict { stable_evidence, unstable_evidence, inconclusive };

const char* verdict_name(StationarityVerdict verdict);

struct StationarityReport {
  StationarityVerdict verdict = StationarityVerdict::inconclusive;
  double third_mean[3] = {0.0, 0.0, 0.0};
  double third_half_width[3] = {0.0, 0.0, 0.0};
  double slope = 0.0;    // batch-mean drift per batch
  double slope_t = 0.0;  // t statistic of the drift
  std::uint64_t slots_used = 0;
};

// Streaming form; requires the slot span [warmup, horizon) up front so the
// 24 equal batches can be placed.
class StationarityAccumulator {
 public:
  StationarityAccumulator(std::uint64_t horizon, std::uint64_t warmup_slots);
  void on_slot(const SlotTrace& trace);
  StationarityReport finish() const;

 private:
  std::uint64_t warmup_;
  std::uint64_t per_batch_;
  std::vector<double> batch_sums_;
};

StationarityReport stationarity_probe(std::span<const SlotTrace> trace,
                                      std::uint64_t warmup_slots);

}  // namespace spaloha
