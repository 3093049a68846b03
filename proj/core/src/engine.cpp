#include "spaloha/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spaloha/config.hpp"

namespace spaloha {

void MessageSet::add(const SpherePoint& p, std::uint64_t arrival_slot,
                     std::uint64_t message_id) {
  xs_.push_back(p.x);
  ys_.push_back(p.y);
  zs_.push_back(p.z);
  arrival_slots_.push_back(arrival_slot);
  ids_.push_back(message_id);
}

void MessageSet::remove_sorted(std::span<const std::size_t> ascending) {
  // Descending order keeps pending indices valid under swap-with-last.
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
    const std::size_t i = *it;
    const std::size_t last = xs_.size() - 1;
    xs_[i] = xs_[last];
    ys_[i] = ys_[last];
    zs_[i] = zs_[last];
    arrival_slots_[i] = arrival_slots_[last];
    ids_[i] = ids_[last];
    xs_.pop_back();
    ys_.pop_back();
    zs_.pop_back();
    arrival_slots_.pop_back();
    ids_.pop_back();
  }
}

SystemState make_initial_state(std::uint32_t initial_population, Rng& rng) {
  SystemState state;
  for (std::uint32_t i = 0; i < initial_population; ++i) {
    state.messages.add(sample_uniform(rng), 0, state.next_message_id++);
  }
  return state;
}

std::vector<std::size_t> neighbours_within(const MessageSet& messages,
                                           std::size_t center, double r) {
  std::vector<std::size_t> hits;
  const SpherePoint c = messages.location(center);
  const std::span<const double> zs = messages.z_coords();
  for (std::size_t i = 0; i < messages.size(); ++i) {
    // |dz| <= chord, so this filter never drops a true neighbour.
    if (std::abs(zs[i] - c.z) > r) continue;
    if (chord_distance(messages.location(i), c) <= r) hits.push_back(i);
  }
  return hits;
}

SlotTrace step(SystemState& state, double p, double r,
               const ArrivalBatch& arrivals, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("step: transmission probability outside [0, 1]");
  }
  if (arrivals.slot != state.slot) {
    throw std::logic_error("step: arrival batch for a different slot");
  }

  SlotTrace trace;
  trace.slot = state.slot;
  trace.n_before = state.messages.size();
  trace.p = p;

  const int n = static_cast<int>(state.messages.size());
  const int b = draw_binomial(n, p, rng);
  trace.b_count = static_cast<std::uint32_t>(b);
  trace.success = (b == 1);

  if (trace.success) {
    const std::size_t transmitter =
        static_cast<std::size_t>(rng.below(state.messages.size()));
    trace.transmitter_id = state.messages.message_id(transmitter);
    const std::vector<std::size_t> removed =
        neighbours_within(state.messages, transmitter, r);
    trace.removed = static_cast<std::uint32_t>(removed.size());
    trace.departures.reserve(removed.size());
    for (const std::size_t i : removed) {
      trace.departures.push_back(Departure{state.messages.message_id(i),
                                           state.messages.arrival_slot(i)});
    }
    state.messages.remove_sorted(removed);
  }

  for (const SpherePoint& location : arrivals.locations) {
    state.messages.add(location, state.slot, state.next_message_id++);
  }
  trace.arrivals = arrivals.count;

  state.slot += 1;
  return trace;
}

void run(const ExperimentConfig& config, Rng& rng, TraceSink& sink) {
  config.validate();
  const std::unique_ptr<Protocol> protocol = make_protocol(config.protocol);
  SystemState state = make_initial_state(config.initial_population, rng);

  for (std::uint64_t slot = 0; slot < config.horizon; ++slot) {
    const std::uint64_t n_before = state.messages.size();
    const PopulationView population(n_before, protocol->centralised());
    const double p = protocol->transmit_probability(population, rng);
    const ArrivalBatch arrivals = draw_batch(config.arrival, slot, rng);
    const SlotTrace trace = step(state, p, config.r, arrivals, rng);

    // Hard conservation check: N_{n+1} = N_n - V_n + xi_n, exactly.
    if (state.messages.size() != n_before - trace.removed + trace.arrivals) {
      throw std::logic_error("run: population recursion violated");
    }

    protocol->observe(
        FeedbackSignal::make(trace.b_count, protocol->feedback_level()));
    sink.on_slot(trace);
  }
}

namespace {

class CollectSink final : public TraceSink {
 public:
  void on_slot(const SlotTrace& trace) override { traces_.push_back(trace); }
  std::vector<SlotTrace> take() { return std::move(traces_); }

 private:
  std::vector<SlotTrace> traces_;
};

}  // namespace

std::vector<SlotTrace> run_collect(const ExperimentConfig& config, Rng& rng) {
  CollectSink sink;
  run(config, rng, sink);
  return sink.take();
}

}  // namespace spaloha
