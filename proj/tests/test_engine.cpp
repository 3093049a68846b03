#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "spaloha/config.hpp"
#include "spaloha/engine.hpp"
#include "spaloha/geometry.hpp"

using namespace spaloha;

namespace {

SystemState make_state(const std::vector<SpherePoint>& points) {
  SystemState state;
  for (const SpherePoint& p : points) {
    state.messages.add(p, 0, state.next_message_id++);
  }
  return state;
}

ArrivalBatch no_arrivals(std::uint64_t slot) { return ArrivalBatch{slot, 0, {}}; }

// A point at central angle `alpha` from the north pole, azimuth 0.
SpherePoint at_angle(double alpha) {
  return SpherePoint{kSphereRadius * std::sin(alpha), 0.0,
                     kSphereRadius * std::cos(alpha)};
}

std::vector<std::size_t> naive_neighbours(const MessageSet& messages,
                                          std::size_t center, double r) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (chord_distance(messages.location(i), messages.location(center)) <= r) {
      hits.push_back(i);
    }
  }
  return hits;
}

ExperimentConfig base_config() {
  ExperimentConfig config;
  config.arrival = ArrivalDistribution::poisson(1.0);
  config.horizon = 2000;
  config.r = 0.2;
  config.seed = 7;
  return config;
}

}  // namespace

TEST_CASE("empty slot: no transmissions, no departures") {
  SystemState state = make_state({});
  Rng rng(1);
  const SlotTrace trace = step(state, 0.7, 0.2, no_arrivals(0), rng);
  CHECK(trace.n_before == 0);
  CHECK(trace.b_count == 0);
  CHECK_FALSE(trace.success);
  CHECK(trace.removed == 0);
  CHECK(state.messages.empty());
  CHECK(state.slot == 1);
}

TEST_CASE("single message with p = 1 always departs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SystemState state = make_state({at_angle(0.4)});
    Rng rng(seed);
    const SlotTrace trace = step(state, 1.0, 0.0, no_arrivals(0), rng);
    CHECK(trace.b_count == 1);
    CHECK(trace.success);
    CHECK(trace.removed == 1);
    CHECK(state.messages.empty());
    REQUIRE(trace.departures.size() == 1);
    CHECK(trace.departures[0].message_id == 0);
    CHECK(trace.transmitter_id == 0);
  }
}

TEST_CASE("close pair departs together on a forced success") {
  // Two messages at chord 0.1 < r = 0.2: replay seeds until B = 1, then the
  // whole pair must leave regardless of which one transmitted.
  const double alpha = 2.0 * std::asin(0.05 / kSphereRadius);
  const SpherePoint a = at_angle(0.0);
  const SpherePoint b = at_angle(alpha);
  REQUIRE(chord_distance(a, b) == doctest::Approx(0.1).epsilon(1e-12));

  bool forced = false;
  for (std::uint64_t seed = 0; seed < 200 && !forced; ++seed) {
    SystemState state = make_state({a, b});
    Rng rng(seed);
    const SlotTrace trace = step(state, 0.5, 0.2, no_arrivals(0), rng);
    if (trace.b_count != 1) continue;
    forced = true;
    CHECK(trace.removed == 2);
    CHECK(state.messages.empty());
    CHECK(trace.departures.size() == 2);
  }
  CHECK(forced);
}

TEST_CASE("step rejects invalid probabilities and mismatched batches") {
  SystemState state = make_state({at_angle(0.3)});
  Rng rng(2);
  CHECK_THROWS_AS(step(state, -0.1, 0.2, no_arrivals(0), rng),
                  std::domain_error);
  CHECK_THROWS_AS(step(state, 1.1, 0.2, no_arrivals(0), rng),
                  std::domain_error);
  CHECK_THROWS_AS(step(state, 0.5, 0.2, no_arrivals(3), rng),
                  std::logic_error);
}

TEST_CASE("neighbours: r = 0 keeps only co-located messages") {
  const SpherePoint p = at_angle(0.8);
  SystemState state = make_state({p, at_angle(0.3), p, at_angle(1.1)});
  const auto hits = neighbours_within(state.messages, 0, 0.0);
  CHECK(hits == std::vector<std::size_t>{0, 2});
}

TEST_CASE("neighbours: r = 2R captures the whole set") {
  SystemState state =
      make_state({at_angle(0.1), at_angle(1.0), at_angle(2.0), at_angle(3.0)});
  CHECK(neighbours_within(state.messages, 1, kSphereDiameter).size() == 4);
}

TEST_CASE("neighbour scan agrees with the naive pairwise scan") {
  Rng rng(3);
  SystemState state;
  for (int i = 0; i < 300; ++i) {
    state.messages.add(sample_uniform(rng), 0, state.next_message_id++);
  }
  for (const double r : {0.0, 0.05, 0.2, 0.4, kSphereDiameter}) {
    for (std::size_t center = 0; center < 10; ++center) {
      CHECK(neighbours_within(state.messages, center, r) ==
            naive_neighbours(state.messages, center, r));
    }
  }
}

TEST_CASE("expected neighbour count matches the cap area") {
  // One fixed center plus 99 uniform messages: E hits = 1 + 99 pi r^2.
  Rng rng(4);
  const double r = 0.2;
  const int reps = 3000;
  double total = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    SystemState state = make_state({at_angle(1.0)});
    for (int i = 0; i < 99; ++i) {
      state.messages.add(sample_uniform(rng), 0, state.next_message_id++);
    }
    total += static_cast<double>(neighbours_within(state.messages, 0, r).size());
  }
  const double cap = std::numbers::pi * r * r;
  const double expected = 1.0 + 99.0 * cap;
  const double sigma_rep = std::sqrt(99.0 * cap * (1.0 - cap));
  CHECK(std::abs(total / reps - expected) <
        3.0 * sigma_rep / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("conservation holds on every slot for every protocol class") {
  for (const ProtocolKind kind :
       {ProtocolKind::a1, ProtocolKind::a2, ProtocolKind::a3}) {
    ExperimentConfig config = base_config();
    config.protocol.kind = kind;
    config.initial_population = 5;
    Rng rng(11);
    const std::vector<SlotTrace> trace = run_collect(config, rng);
    REQUIRE(trace.size() == config.horizon);
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
      REQUIRE(trace[i + 1].n_before ==
              trace[i].n_before - trace[i].removed + trace[i].arrivals);
      REQUIRE(trace[i].b_count <= trace[i].n_before);
      REQUIRE(trace[i].success == (trace[i].b_count == 1));
      REQUIRE((trace[i].removed > 0) == trace[i].success);
      REQUIRE(trace[i].departures.size() == trace[i].removed);
    }
  }
}

TEST_CASE("r = 0 recovers the classical single departure") {
  ExperimentConfig config = base_config();
  config.r = 0.0;
  Rng rng(12);
  const std::vector<SlotTrace> trace = run_collect(config, rng);
  int successes = 0;
  for (const SlotTrace& t : trace) {
    REQUIRE(t.removed == (t.success ? 1u : 0u));
    successes += t.success ? 1 : 0;
  }
  CHECK(successes > 0);
}

TEST_CASE("r >= 2R clears the whole system on success") {
  ExperimentConfig config = base_config();
  config.r = kSphereDiameter;
  config.arrival = ArrivalDistribution::poisson(2.0);
  Rng rng(13);
  const std::vector<SlotTrace> trace = run_collect(config, rng);
  int full_clears = 0;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    if (trace[i].success) {
      REQUIRE(trace[i].removed == trace[i].n_before);
      REQUIRE(trace[i + 1].n_before == trace[i].arrivals);
      ++full_clears;
    }
  }
  CHECK(full_clears > 0);
}

TEST_CASE("a success clears the transmitter's partition cell") {
  const double r = 0.3;
  const std::vector<PartitionCell> cells = partition_sphere(r);
  Rng rng(14);
  SystemState state = make_initial_state(30, rng);
  const ArrivalDistribution arrivals = ArrivalDistribution::poisson(1.0);
  int checked = 0;
  for (std::uint64_t slot = 0; slot < 3000; ++slot) {
    std::map<std::uint64_t, std::uint32_t> cell_of;
    for (std::size_t i = 0; i < state.messages.size(); ++i) {
      cell_of[state.messages.message_id(i)] =
          locate_cell(state.messages.location(i), cells);
    }
    const std::uint64_t n = state.messages.size();
    const double p = n == 0 ? 1.0 : std::min(1.0, 1.0 / static_cast<double>(n));
    const ArrivalBatch batch = draw_batch(arrivals, slot, rng);
    const SlotTrace trace = step(state, p, r, batch, rng);
    if (!trace.success) continue;
    ++checked;
    const std::uint32_t cleared_cell = cell_of.at(*trace.transmitter_id);
    for (std::size_t i = 0; i < state.messages.size(); ++i) {
      const auto it = cell_of.find(state.messages.message_id(i));
      if (it == cell_of.end()) continue;  // arrived this slot
      REQUIRE(it->second != cleared_cell);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("binomial audit: one-step request counts match Binomial(k, p)") {
  // Frozen state of 6 messages, p = 0.3; 10^4 independent one-step
  // replications; chi-square against the exact pmf at the 1% level.
  const int k = 6;
  const double p = 0.3;
  std::vector<SpherePoint> points;
  for (int i = 0; i < k; ++i) points.push_back(at_angle(0.2 + 0.4 * i));

  std::vector<std::uint64_t> counts(k + 1, 0);
  const int reps = 10000;
  for (int rep = 0; rep < reps; ++rep) {
    SystemState state = make_state(points);
    Rng rng(1000 + rep);
    const SlotTrace trace = step(state, p, 0.0, no_arrivals(0), rng);
    ++counts[trace.b_count];
  }
  // Pascal's triangle oracle.
  std::vector<double> pmf(k + 1, 0.0);
  for (int j = 0; j <= k; ++j) {
    double choose = 1.0;
    for (int i = 0; i < j; ++i) choose = choose * (k - i) / (i + 1);
    pmf[j] = choose * std::pow(p, j) * std::pow(1 - p, k - j);
  }
  double stat = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double expected = pmf[j] * reps;
    const double d = static_cast<double>(counts[j]) - expected;
    stat += d * d / expected;
  }
  CHECK(stat < 16.812);  // chi-square 0.99, df = 6
}

TEST_CASE("time to empty matches the absorbing-chain law") {
  // A1 with c = 1, no arrivals, N0 = 5, r = 2R: N stays 5 until the single
  // clearing success, so the time to empty is geometric with
  // s = 5 * (1/5) * (4/5)^4 = 0.4096.
  const double s = 0.4096;
  const int reps = 10000;
  ExperimentConfig config;
  config.protocol.kind = ProtocolKind::a1;
  config.protocol.a1_c = 1.0;
  config.arrival = ArrivalDistribution::deterministic(0);
  config.r = kSphereDiameter;
  config.initial_population = 5;
  config.horizon = 100;

  std::vector<int> time_to_empty(reps, -1);
  for (int rep = 0; rep < reps; ++rep) {
    config.seed = 50000 + rep;
    Rng rng(config.seed);
    const std::vector<SlotTrace> trace = run_collect(config, rng);
    for (const SlotTrace& t : trace) {
      if (t.success) {
        REQUIRE(t.removed == 5);
        time_to_empty[rep] = static_cast<int>(t.slot) + 1;
        break;
      }
      REQUIRE(t.n_before == 5);
    }
    REQUIRE(time_to_empty[rep] > 0);
  }

  double mean = 0.0;
  for (const int t : time_to_empty) mean += t;
  mean /= reps;
  const double true_mean = 1.0 / s;
  const double true_sd = std::sqrt(1.0 - s) / s;
  CHECK(std::abs(mean - true_mean) < 3.0 * true_sd / std::sqrt(1.0 * reps));

  for (int n = 1; n <= 12; ++n) {
    double survivors = 0.0;
    for (const int t : time_to_empty) {
      if (t > n) survivors += 1.0;
    }
    const double expected = std::pow(1.0 - s, n);
    const double sigma = std::sqrt(expected * (1.0 - expected) / reps);
    CHECK(std::abs(survivors / reps - expected) < 3.0 * sigma + 1e-12);
  }
}

TEST_CASE("runs are bit-identical under the same seed") {
  ExperimentConfig config = base_config();
  config.protocol.kind = ProtocolKind::a3;
  Rng rng_a(99), rng_b(99), rng_c(100);
  const std::vector<SlotTrace> a = run_collect(config, rng_a);
  const std::vector<SlotTrace> b = run_collect(config, rng_b);
  const std::vector<SlotTrace> c = run_collect(config, rng_c);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("horizon zero rejected, initial population seeds the system") {
  ExperimentConfig config = base_config();
  config.horizon = 1;
  config.initial_population = 7;
  Rng rng(15);
  const std::vector<SlotTrace> trace = run_collect(config, rng);
  REQUIRE(trace.size() == 1);
  CHECK(trace[0].n_before == 7);

  config.horizon = 0;
  Rng rng2(15);
  CHECK_THROWS_AS(run_collect(config, rng2), ConfigError);
}

TEST_CASE("message ids are unique across a run") {
  ExperimentConfig config = base_config();
  config.initial_population = 3;
  Rng rng(16);
  const std::vector<SlotTrace> trace = run_collect(config, rng);
  std::set<std::uint64_t> departed;
  for (const SlotTrace& t : trace) {
    for (const Departure& d : t.departures) {
      CHECK(departed.insert(d.message_id).second);
    }
  }
}
