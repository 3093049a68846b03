#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "spaloha/random.hpp"

namespace spaloha {

// Thrown when a decentralised controller tries to read information its
// feedback class censors (exact counts, ternary outcome, or the population).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// How much of the channel outcome a protocol class may observe.
//   binary:  J_n only (success / non-success)
//   ternary: min(B_n, 2) (empty / success / collision)
//   exact:   B_n itself (centralised)
enum class FeedbackLevel { binary, ternary, exact };

enum class Ternary { empty, success, collision };

// Per-slot channel observation. Stores the exact request count but gates
// reads by censoring level, so a controller structurally cannot use more
// feedback than its class allows.
class FeedbackSignal {
 public:
  static FeedbackSignal make(std::uint32_t b_count, FeedbackLevel level) {
    return FeedbackSignal(b_count, level);
  }

  FeedbackLevel level() const { return level_; }

  // J_n: readable at every level.
  bool success() const { return b_count_ == 1; }

  // min(B_n, 2): requires ternary or exact level.
  Ternary ternary() const {
    if (level_ == FeedbackLevel::binary) {
      throw ContractViolation("feedback: ternary read under binary censoring");
    }
    if (b_count_ == 0) return Ternary::empty;
    if (b_count_ == 1) return Ternary::success;
    return Ternary::collision;
  }

  // B_n: centralised mode only.
  std::uint32_t exact_count() const {
    if (level_ != FeedbackLevel::exact) {
      throw ContractViolation("feedback: exact count read when censored");
    }
    return b_count_;
  }

 private:
  FeedbackSignal(std::uint32_t b_count, FeedbackLevel level)
      : b_count_(b_count), level_(level) {}

  std::uint32_t b_count_;
  FeedbackLevel level_;
};

// View of the current population size N_n, readable only by centralised
// protocols. The run loop hands decentralised controllers a sealed view.
class PopulationView {
 public:
  PopulationView(std::uint64_t count, bool readable)
      : count_(count), readable_(readable) {}

  std::uint64_t count() const {
    if (!readable_) {
      throw ContractViolation("population: N read by decentralised protocol");
    }
    return count_;
  }

 private:
  std::uint64_t count_;
  bool readable_;
};

// ---------------------------------------------------------------------------
// Class A1 (centralised): p_n = c / N_n.

struct ProtocolStateA1 {
  double c = 1.0;  // > 0
};

// min(1, c/n) for n >= 1; 1 for n = 0 (vacuous, nobody transmits).
double a1_probability(const ProtocolStateA1& state, std::uint64_t n_messages);

// ---------------------------------------------------------------------------
// Class A2 (ternary feedback): multiplicative backoff
//   collision -> p*c1,  success -> p,  empty -> min(1, p*c2).

struct ProtocolStateA2 {
  double c1 = 0.5;  // in (0, 1)
  double c2 = 2.0;  // > 1
  double p = 1.0;   // in (0, 1]
};

ProtocolStateA2 a2_update(ProtocolStateA2 state, const FeedbackSignal& fb);

// ---------------------------------------------------------------------------
// Class A3 (binary feedback, doubly randomised): a fair coin I_n picks one
// of two probes (1 - eps(K))/K or 1/K, and K moves by h(K) on a success
// depending on which probe was active, or by +c on a non-success.

// h(x), increasing to infinity: sqrt(x), log(1+x), or x/2 ("half", a
// multiplicative step like A2's backoff).
enum class GrowthFunction { sqrt, log, half };
// eps(x) = min(1/2, x^-e), decreasing to zero; named by the exponent e.
enum class EpsilonFunction { quarter, half, eighth };

double eval_growth(GrowthFunction h, double x);
double eval_epsilon(EpsilonFunction eps, double x);

const char* growth_name(GrowthFunction h);
const char* epsilon_name(EpsilonFunction eps);

struct ProtocolStateA3 {
  double c = 1.0;  // additive step on non-success, > 0
  double k = 1.0;  // >= 1 always
  // h = x/2 by default: sublinear h (sqrt, log) lets upward K excursions
  // outrun the differential correction and the population diverges in
  // simulation, while the multiplicative step recovers geometrically.
  GrowthFunction h = GrowthFunction::half;
  EpsilonFunction eps = EpsilonFunction::quarter;
};

// (1 - eps(K))/K when coin = 0, 1/K when coin = 1.
double a3_probability(const ProtocolStateA3& state, int coin);

// K + c if no success; K + h(K) on success with coin 0;
// max(K - h(K), 1) on success with coin 1. Reads only fb.success().
ProtocolStateA3 a3_update(ProtocolStateA3 state, const FeedbackSignal& fb,
                          int coin);

// ---------------------------------------------------------------------------
// Success chance of one slot: P(B = 1 | N = k, per-message probability p)
// = k p (1-p)^{k-1}; zero for k = 0.

double success_probability(std::uint64_t k, double p);

// Infimum over k >= 1 of the per-slot success chance under p = min(1, c/k):
// the finite range k <= 10^5 compared against the k -> infinity limit
// c e^{-c}. Defined for c in (0, 1], where every term is positive.
double b_min(double c);

// ---------------------------------------------------------------------------
// Slot-by-slot controller used by the run loop; one owner per replication.

class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual FeedbackLevel feedback_level() const = 0;
  virtual bool centralised() const = 0;

  // p_n for the coming slot. A3 draws its coin here; A1 reads the view.
  virtual double transmit_probability(const PopulationView& population,
                                      Rng& rng) = 0;

  // Channel outcome of the slot just finished, censored to feedback_level().
  virtual void observe(const FeedbackSignal& fb) = 0;

  virtual std::string describe() const = 0;
};

std::unique_ptr<Protocol> make_a1(ProtocolStateA1 state);
std::unique_ptr<Protocol> make_a2(ProtocolStateA2 state);
std::unique_ptr<Protocol> make_a3(ProtocolStateA3 state);

}  // namespace spaloha
