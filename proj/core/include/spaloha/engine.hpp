#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spaloha/geometry.hpp"
#include "spaloha/protocols.hpp"
#include "spaloha/random.hpp"
#include "spaloha/traffic.hpp"

namespace spaloha {

struct MessageRecord {
  SpherePoint location;
  std::uint64_t arrival_slot = 0;
  std::uint64_t message_id = 0;
};

// The waiting messages X_n, stored as parallel arrays so the removal scan
// streams through coordinates. Removal uses swap-with-last, so array order
// is an implementation detail; the contents form a set.
class MessageSet {
 public:
  std::size_t size() const { return xs_.size(); }
  bool empty() const { return xs_.empty(); }

  void add(const SpherePoint& p, std::uint64_t arrival_slot,
           std::uint64_t message_id);

  SpherePoint location(std::size_t i) const {
    return SpherePoint{xs_[i], ys_[i], zs_[i]};
  }
  std::uint64_t arrival_slot(std::size_t i) const { return arrival_slots_[i]; }
  std::uint64_t message_id(std::size_t i) const { return ids_[i]; }
  MessageRecord record(std::size_t i) const {
    return MessageRecord{location(i), arrival_slots_[i], ids_[i]};
  }

  std::span<const double> z_coords() const { return zs_; }

  // Removes the given positions; `ascending` must be sorted ascending.
  void remove_sorted(std::span<const std::size_t> ascending);

 private:
  std::vector<double> xs_, ys_, zs_;
  std::vector<std::uint64_t> arrival_slots_;
  std::vector<std::uint64_t> ids_;
};

struct SystemState {
  MessageSet messages;
  std::uint64_t slot = 0;
  std::uint64_t next_message_id = 0;
};

// `initial_population` messages placed uniformly, ids 0.., arrival slot 0.
SystemState make_initial_state(std::uint32_t initial_population, Rng& rng);

struct Departure {
  std::uint64_t message_id = 0;
  std::uint64_t arrival_slot = 0;

  bool operator==(const Departure&) const = default;
};

// What happened in one slot. `removed > 0` iff `success`; a success removes
// the transmitter and every message within chord r of it.
struct SlotTrace {
  std::uint64_t slot = 0;
  std::uint64_t n_before = 0;  // N_n
  double p = 0.0;              // p_n
  std::uint32_t b_count = 0;   // B_n
  bool success = false;        // J_n
  std::uint32_t removed = 0;   // V_n
  std::uint32_t arrivals = 0;  // xi_n
  std::optional<std::uint64_t> transmitter_id;
  std::vector<Departure> departures;

  bool operator==(const SlotTrace&) const = default;
};

// Indices of all messages within chord r of the message at `center`,
// including `center` itself ("at most r": closed ball). Must agree exactly
// with the removal set the step uses.
std::vector<std::size_t> neighbours_within(const MessageSet& messages,
                                           std::size_t center, double r);

// Advances one slot: draws B_n ~ Binomial(N_n, p); on B_n = 1 picks the
// transmitter uniformly and removes its chord-r ball; appends the arrivals
// (they become eligible next slot). The (B, transmitter) pair has exactly
// the law of per-message independent coins, because all messages share p.
// Requires arrivals.slot == state.slot and p in [0, 1] (std::domain_error).
SlotTrace step(SystemState& state, double p, double r,
               const ArrivalBatch& arrivals, Rng& rng);

// Streaming consumer of per-slot traces. The trace reference is only valid
// during the call; implementations copy what they keep.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_slot(const SlotTrace& trace) = 0;
};

class CompositeSink final : public TraceSink {
 public:
  void add(TraceSink* sink) { sinks_.push_back(sink); }
  void on_slot(const SlotTrace& trace) override {
    for (TraceSink* s : sinks_) s->on_slot(trace);
  }

 private:
  std::vector<TraceSink*> sinks_;
};

struct ExperimentConfig;  // config.hpp

// The closed loop for one replication: the protocol emits p_n (A1 sees N_n,
// A2 only ternary history, A3 only binary history plus its coin), the slot
// advances, and the outcome is fed back at the class-appropriate censoring
// level. Per-slot draw order is fixed: protocol coin, arrival count,
// arrival locations, transmission count, transmitter pick. The population
// recursion N' = N - V + xi is asserted every slot.
void run(const ExperimentConfig& config, Rng& rng, TraceSink& sink);

std::vector<SlotTrace> run_collect(const ExperimentConfig& config, Rng& rng);

}  // namespace spaloha
