#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spaloha/geometry.hpp"
#include "spaloha/random.hpp"

namespace spaloha {

enum class ArrivalKind { poisson, bernoulli, deterministic, finite_pmf };

// Per-slot arrival count law. Every kind exposes an exact P(count = 0) and
// an exact pmf, which the stability bound and the chain oracle rely on.
class ArrivalDistribution {
 public:
  static ArrivalDistribution poisson(double rate);
  static ArrivalDistribution bernoulli(double p);
  static ArrivalDistribution deterministic(int count);
  // Table of (count, probability); probabilities must sum to 1 within 1e-12.
  static ArrivalDistribution finite_pmf(
      std::vector<std::pair<int, double>> table);

  // Parses "poisson:RATE", "bernoulli:P", "deterministic:K" or
  // "pmf:K0:P0,K1:P1,...". Throws std::invalid_argument on bad input.
  static ArrivalDistribution parse(std::string_view spec);

  ArrivalKind kind() const { return kind_; }
  double mean() const;
  double prob_zero() const;
  // E log max(1, count) is finite for every built-in kind (Poisson has all
  // moments, the others have bounded support).
  bool log_moment_finite() const { return true; }
  double pmf(int count) const;
  // pmf values for counts 0..n inclusive.
  std::vector<double> pmf_table(int n) const;

  int draw(Rng& rng) const;

  // Canonical spec string, parseable by parse().
  std::string describe() const;

 private:
  ArrivalDistribution(ArrivalKind kind, double rate,
                      std::vector<std::pair<int, double>> table)
      : kind_(kind), rate_(rate), table_(std::move(table)) {}

  ArrivalKind kind_;
  double rate_ = 0.0;  // poisson rate / bernoulli p / deterministic count
  std::vector<std::pair<int, double>> table_;  // finite_pmf only, sorted
};

// Arrivals of one slot: the drawn count and that many uniform locations.
struct ArrivalBatch {
  std::uint64_t slot = 0;
  std::uint32_t count = 0;
  std::vector<SpherePoint> locations;
};

ArrivalBatch draw_batch(const ArrivalDistribution& dist, std::uint64_t slot,
                        Rng& rng);

}  // namespace spaloha
