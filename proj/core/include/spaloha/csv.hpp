#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "spaloha/analysis.hpp"
#include "spaloha/config.hpp"
#include "spaloha/engine.hpp"

namespace spaloha {

// Numbers are written with %.12g: locale-independent, '.' decimal point.
std::string csv_number(double v);

// Resolved config as '#'-prefixed header lines.
void write_config_header(std::ostream& out, const ExperimentConfig& config);

// One summary row per experiment (or per sweep point).
struct SummaryRow {
  double lambda = 0.0;
  double r = 0.0;
  double s_r = 0.0;
  std::string protocol;
  std::optional<DelayEstimate> delay;  // nullopt -> inconclusive, nan cells
  double mean_n = 0.0;
  double littles = 0.0;
  double bound = 0.0;  // e / S_r
  std::string verdict;
  std::uint64_t n_departures = 0;
  std::uint64_t horizon = 0;
  std::uint32_t replications = 0;
  std::uint64_t seed = 0;
};

extern const char* const kSummaryHeader;
void write_summary_row(std::ostream& out, const SummaryRow& row);

// Per-slot trace rows: slot,n_before,p,b_count,success,removed,arrivals.
extern const char* const kTraceHeader;
class TraceCsvSink final : public TraceSink {
 public:
  explicit TraceCsvSink(std::ostream& out) : out_(out) {}
  void on_slot(const SlotTrace& trace) override;

 private:
  std::ostream& out_;
};

// Per-departure rows: message_id,arrival_slot,departure_slot,delay.
extern const char* const kDepartureHeader;
class DepartureCsvSink final : public TraceSink {
 public:
  explicit DepartureCsvSink(std::ostream& out) : out_(out) {}
  void on_slot(const SlotTrace& trace) override;

 private:
  std::ostream& out_;
};

}  // namespace spaloha
