#include "spaloha/csv.hpp"

#include <cstdio>
#include <sstream>

namespace spaloha {

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_config_header(std::ostream& out, const ExperimentConfig& config) {
  std::istringstream lines(config.canonical());
  std::string line;
  while (std::getline(lines, line)) {
    out << "# " << line << '\n';
  }
  // Derived metadata: records the log-moment hypothesis of the stability
  // theorem for the configured arrival law.
  out << "# arrival_log_moment_finite = "
      << (config.arrival.log_moment_finite() ? "true" : "false") << '\n';
}

const char* const kSummaryHeader =
    "lambda,r,s_r,protocol,mean_delay,ci_half_width,mean_n,"
    "littles_discrepancy,bound_e_over_sr,verdict,n_departures,horizon,"
    "replications,seed";

void write_summary_row(std::ostream& out, const SummaryRow& row) {
  out << csv_number(row.lambda) << ',' << csv_number(row.r) << ','
      << csv_number(row.s_r) << ',' << row.protocol << ',';
  if (row.delay) {
    out << csv_number(row.delay->mean_delay) << ','
        << csv_number(row.delay->half_width) << ',';
  } else {
    out << "nan,nan,";
  }
  out << csv_number(row.mean_n) << ',' << csv_number(row.littles) << ','
      << csv_number(row.bound) << ',' << row.verdict << ','
      << row.n_departures << ',' << row.horizon << ',' << row.replications
      << ',' << row.seed << '\n';
}

const char* const kTraceHeader =
    "slot,n_before,p,b_count,success,removed,arrivals";

void TraceCsvSink::on_slot(const SlotTrace& trace) {
  out_ << trace.slot << ',' << trace.n_before << ',' << csv_number(trace.p)
       << ',' << trace.b_count << ',' << (trace.success ? 1 : 0) << ','
       << trace.removed << ',' << trace.arrivals << '\n';
}

const char* const kDepartureHeader =
    "message_id,arrival_slot,departure_slot,delay";

void DepartureCsvSink::on_slot(const SlotTrace& trace) {
  for (const Departure& d : trace.departures) {
    out_ << d.message_id << ',' << d.arrival_slot << ',' << trace.slot << ','
         << (trace.slot - d.arrival_slot) << '\n';
  }
}

}  // namespace spaloha
