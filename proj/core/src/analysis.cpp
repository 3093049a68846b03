#include "spaloha/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spaloha/geometry.hpp"
#include "spaloha/protocols.hpp"

namespace spaloha {

std::optional<DelayEstimate> estimate_from_delays(
    std::span<const std::uint32_t> delays, std::uint64_t warmup_slots,
    std::uint32_t batches) {
  if (batches < 2) return std::nullopt;
  if (delays.size() < static_cast<std::size_t>(batches) * 10) {
    return std::nullopt;
  }
  const auto interval = batch_means(delays, static_cast<int>(batches));
  if (!interval) return std::nullopt;
  DelayEstimate est;
  est.mean_delay = interval->mean;
  est.half_width = interval->half_width;
  est.n_departures = delays.size();
  est.warmup_slots = warmup_slots;
  est.batch_count = batches;
  return est;
}

std::optional<DelayEstimate> estimate_mean_delay(
    std::span<const DepartureEvent> departures, std::uint64_t warmup_slots,
    std::uint32_t batches) {
  std::vector<std::uint32_t> delays;
  delays.reserve(departures.size());
  for (const DepartureEvent& d : departures) {
    if (d.departure_slot >= warmup_slots) {
      delays.push_back(static_cast<std::uint32_t>(d.delay()));
    }
  }
  return estimate_from_delays(delays, warmup_slots, batches);
}

std::optional<DelayEstimate> combine_replications(
    std::span<const std::optional<DelayEstimate>> estimates) {
  if (estimates.empty()) return std::nullopt;
  for (const auto& e : estimates) {
    if (!e) return std::nullopt;
  }
  if (estimates.size() == 1) return estimates.front();

  std::vector<double> means;
  means.reserve(estimates.size());
  DelayEstimate combined;
  for (const auto& e : estimates) {
    means.push_back(e->mean_delay);
    combined.n_departures += e->n_departures;
  }
  const IntervalEstimate interval = t_interval(means);
  combined.mean_delay = interval.mean;
  combined.half_width = interval.half_width;
  combined.warmup_slots = estimates.front()->warmup_slots;
  combined.batch_count = static_cast<std::uint32_t>(estimates.size());
  return combined;
}

double littles_discrepancy(double mean_n, double lambda, double mean_delay) {
  if (mean_n <= 0.0) {
    return lambda * mean_delay == 0.0 ? 0.0
                                      : std::numeric_limits<double>::infinity();
  }
  return std::abs(mean_n - lambda * mean_delay) / mean_n;
}

double littles_law_check(std::span<const SlotTrace> trace,
                         const DelayEstimate& estimate, double lambda) {
  double sum_n = 0.0;
  std::uint64_t slots = 0;
  for (const SlotTrace& t : trace) {
    if (t.slot < estimate.warmup_slots) continue;
    sum_n += static_cast<double>(t.n_before);
    ++slots;
  }
  const double mean_n =
      slots == 0 ? 0.0 : sum_n / static_cast<double>(slots);
  return littles_discrepancy(mean_n, lambda, estimate.mean_delay);
}

// ---------------------------------------------------------------------------

RegenerationAccumulator::RegenerationAccumulator(
    const RegenerationParams& params)
    : params_(params) {}

void RegenerationAccumulator::on_slot(const SlotTrace& trace) {
  if (trace.n_before == 0) empty_epochs_.push_back(trace.slot);

  // Blocks of M slots starting at slot M (block index n >= 1 covers slots
  // [nM, nM+M)): all must have no arrivals and be empty or a success.
  const std::uint64_t m = params_.m;
  if (trace.slot < m || gamma_.has_value()) return;
  const std::uint64_t block = trace.slot / m;
  const bool slot_ok =
      trace.arrivals == 0 && (trace.n_before == 0 || trace.success);
  if (trace.slot % m == 0) block_ok_ = slot_ok;
  else block_ok_ = block_ok_ && slot_ok;
  if (trace.slot % m == m - 1 && block_ok_) gamma_ = block;
}

RegenerationReport RegenerationAccumulator::finish() const {
  RegenerationReport report;
  for (std::size_t i = 1; i < empty_epochs_.size(); ++i) {
    report.cycle_lengths.push_back(empty_epochs_[i] - empty_epochs_[i - 1]);
  }
  if (gamma_) report.gamma_samples.push_back(*gamma_);
  report.q_lower_bound = std::pow(params_.a, params_.m) *
                         std::pow(params_.b, params_.m);
  return report;
}

RegenerationReport detect_regenerations(std::span<const SlotTrace> trace,
                                        const RegenerationParams& params) {
  RegenerationAccumulator acc(params);
  for (const SlotTrace& t : trace) acc.on_slot(t);
  return acc.finish();
}

// ---------------------------------------------------------------------------

ChainOracleResult chain_oracle(const ArrivalDistribution& arrival, double c,
                               std::uint32_t n_max, double truncation_tol) {
  if (n_max < 1) throw std::domain_error("chain_oracle: n_max must be >= 1");
  const std::size_t size = static_cast<std::size_t>(n_max) + 1;

  // Arrival pmf truncated at n_max; tail kept separately for folding.
  const std::vector<double> xi = arrival.pmf_table(static_cast<int>(n_max));
  std::vector<double> xi_ccdf(size);  // P(xi > k)
  {
    double cum = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      cum += xi[k];
      xi_ccdf[k] = std::max(0.0, 1.0 - cum);
    }
  }

  std::vector<double> succ(size, 0.0);  // success chance from state k
  for (std::size_t k = 1; k < size; ++k) {
    const double p = std::min(1.0, c / static_cast<double>(k));
    succ[k] = success_probability(k, p);
  }

  const auto apply = [&](const std::vector<double>& pi,
                         std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    // Reset branch: from 0 always, from k >= 1 with chance succ[k]; the next
    // state is xi either way.
    double reset_mass = pi[0];
    for (std::size_t k = 1; k < size; ++k) reset_mass += pi[k] * succ[k];
    for (std::size_t j = 0; j < size; ++j) out[j] += reset_mass * xi[j];
    out[n_max] += reset_mass * xi_ccdf[n_max];
    // Hold branch: N' = k + xi, overflow folded into the top state.
    for (std::size_t k = 1; k < size; ++k) {
      const double w = pi[k] * (1.0 - succ[k]);
      if (w == 0.0) continue;
      const std::size_t room = static_cast<std::size_t>(n_max) - k;
      for (std::size_t j = 0; j <= room; ++j) out[k + j] += w * xi[j];
      out[n_max] += w * xi_ccdf[room];
    }
  };

  std::vector<double> pi(size, 0.0);
  pi[0] = 1.0;
  std::vector<double> next(size, 0.0);
  ChainOracleResult result;
  constexpr std::uint32_t kMaxIterations = 200000;
  for (result.iterations = 1; result.iterations <= kMaxIterations;
       ++result.iterations) {
    apply(pi, next);
    double total = 0.0;
    for (const double v : next) total += v;
    for (double& v : next) v /= total;
    double l1 = 0.0;
    for (std::size_t j = 0; j < size; ++j) l1 += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (l1 <= 1e-12) break;
  }

  apply(pi, next);
  double residual = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    residual = std::max(residual, std::abs(next[j] - pi[j]));
  }

  result.stationary_pmf = pi;
  result.balance_residual = residual;
  result.truncation_mass = pi[n_max];
  result.reliable = result.truncation_mass < truncation_tol;
  for (std::size_t j = 0; j < size; ++j) {
    result.mean_n += static_cast<double>(j) * pi[j];
  }
  result.mean_delay_littles = result.mean_n / arrival.mean();
  return result;
}

// ---------------------------------------------------------------------------

double conjecture_bound(double r) {
  if (!(r > 0.0 && r <= kSphereDiameter)) {
    throw std::domain_error("conjecture_bound: r must be in (0, 2R]");
  }
  return std::numbers::e / cap_area(r);
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kProbeBatches = 24;  // 8 per third
constexpr std::uint32_t kBatchesPerThird = kProbeBatches / 3;
constexpr std::uint64_t kMinSlotsPerBatch = 10;
}  // namespace

const char* verdict_name(StationarityVerdict verdict) {
  switch (verdict) {
    case StationarityVerdict::stable_evidence:
      return "stable-evidence";
    case StationarityVerdict::unstable_evidence:
      return "unstable-evidence";
    case StationarityVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

StationarityAccumulator::StationarityAccumulator(std::uint64_t horizon,
                                                 std::uint64_t warmup_slots)
    : warmup_(warmup_slots) {
  const std::uint64_t usable = horizon > warmup_slots ? horizon - warmup_slots : 0;
  per_batch_ = usable / kProbeBatches;
  if (per_batch_ >= kMinSlotsPerBatch) {
    batch_sums_.assign(kProbeBatches, 0.0);
  }
}

void StationarityAccumulator::on_slot(const SlotTrace& trace) {
  if (batch_sums_.empty() || trace.slot < warmup_) return;
  const std::uint64_t offset = trace.slot - warmup_;
  const std::uint64_t batch = offset / per_batch_;
  if (batch >= kProbeBatches) return;  // remainder slots beyond the last batch
  batch_sums_[batch] += static_cast<double>(trace.n_before);
}

StationarityReport StationarityAccumulator::finish() const {
  StationarityReport report;
  if (batch_sums_.empty()) return report;  // inconclusive: too short
  report.slots_used = per_batch_ * kProbeBatches;

  std::vector<double> means(kProbeBatches);
  for (std::size_t b = 0; b < kProbeBatches; ++b) {
    means[b] = batch_sums_[b] / static_cast<double>(per_batch_);
  }

  for (int third = 0; third < 3; ++third) {
    const std::span<const double> part(means.data() + third * kBatchesPerThird,
                                       kBatchesPerThird);
    const IntervalEstimate est = t_interval(part);
    report.third_mean[third] = est.mean;
    report.third_half_width[third] = est.half_width;
  }

  // OLS drift across all batch means; batch means of long batches are close
  // to independent, so the t statistic is meaningful.
  {
    const double n = static_cast<double>(kProbeBatches);
    double x_mean = (n - 1.0) / 2.0;
    double sxx = 0.0;
    double sxy = 0.0;
    double y_mean = 0.0;
    for (const double y : means) y_mean += y;
    y_mean /= n;
    for (std::size_t b = 0; b < kProbeBatches; ++b) {
      const double dx = static_cast<double>(b) - x_mean;
      sxx += dx * dx;
      sxy += dx * (means[b] - y_mean);
    }
    report.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t b = 0; b < kProbeBatches; ++b) {
      const double fit =
          y_mean + report.slope * (static_cast<double>(b) - x_mean);
      const double e = means[b] - fit;
      ss_res += e * e;
    }
    const double se =
        std::sqrt(ss_res / (n - 2.0)) / std::sqrt(sxx);
    if (se == 0.0) {
      report.slope_t = 0.0;
    } else {
      report.slope_t = report.slope / se;
    }
  }

  const auto overlap = [&](int i, int j) {
    return std::abs(report.third_mean[i] - report.third_mean[j]) <=
           report.third_half_width[i] + report.third_half_width[j];
  };
  const bool grows_significantly =
      report.third_mean[2] - report.third_half_width[2] >
      report.third_mean[0] + report.third_half_width[0];
  const double t_crit =
      student_t_quantile(0.975, static_cast<int>(kProbeBatches) - 2);

  if (grows_significantly && report.slope > 0.0 && report.slope_t > t_crit) {
    report.verdict = StationarityVerdict::unstable_evidence;
  } else if (overlap(0, 1) && overlap(1, 2) && overlap(0, 2)) {
    report.verdict = StationarityVerdict::stable_evidence;
  } else {
    report.verdict = StationarityVerdict::inconclusive;
  }
  return report;
}

StationarityReport stationarity_probe(std::span<const SlotTrace> trace,
                                      std::uint64_t warmup_slots) {
  const std::uint64_t horizon =
      trace.empty() ? 0 : trace.back().slot + 1;
  StationarityAccumulator acc(horizon, warmup_slots);
  for (const SlotTrace& t : trace) acc.on_slot(t);
  return acc.finish();
}

}  // namespace spaloha
