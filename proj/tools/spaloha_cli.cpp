// Command-line runner for the spatial slotted-ALOHA simulator: single
// experiments, lambda/r sweeps, the full-clear chain oracle, and the sphere
// partition audit. All commands are seed-reproducible: identical seed and
// config produce byte-identical output files regardless of --workers.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spaloha/analysis.hpp"
#include "spaloha/config.hpp"
#include "spaloha/csv.hpp"
#include "spaloha/engine.hpp"
#include "spaloha/geometry.hpp"
#include "spaloha/runner.hpp"

namespace fs = std::filesystem;
using namespace spaloha;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // KEY=VALUE pairs
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint32_t> replications;
  std::optional<std::uint32_t> workers;
  std::optional<std::string> out_dir;
};

void add_common_options(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "Flat KEY = VALUE config file");
  cmd->add_option("--set", args->overrides,
                  "Override any config key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", args->seed, "Master seed (64-bit)");
  cmd->add_option("--horizon", args->horizon, "Slots per replication");
  cmd->add_option("--replications", args->replications,
                  "Independent replications");
  cmd->add_option("--workers", args->workers,
                  "Worker threads (0 = all cores); never affects results");
  cmd->add_option("--out", args->out_dir, "Output directory");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) {
    config = load_config_file(args.config_path);
  }
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set", "expected KEY=VALUE, got '" + kv + "'");
    }
    apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed) config.seed = *args.seed;
  if (args.horizon) config.horizon = *args.horizon;
  if (args.replications) config.replications = *args.replications;
  if (args.workers) config.workers = *args.workers;
  if (args.out_dir) config.output_dir = *args.out_dir;
  config.validate();
  return config;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings on all platforms
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path.string() +
                             "'");
  }
  return out;
}

// Per-replication trace and departure CSV writers used by `run`.
class FileSink final : public TraceSink {
 public:
  FileSink(const fs::path& dir, std::uint32_t replication,
           const ExperimentConfig& config)
      : trace_out_(open_output(dir / ("trace_rep" +
                                      std::to_string(replication) + ".csv"))),
        departures_out_(open_output(
            dir / ("departures_rep" + std::to_string(replication) + ".csv"))),
        trace_sink_(trace_out_),
        departure_sink_(departures_out_) {
    write_config_header(trace_out_, config);
    trace_out_ << "# replication = " << replication << '\n'
               << kTraceHeader << '\n';
    write_config_header(departures_out_, config);
    departures_out_ << "# replication = " << replication << '\n'
                    << kDepartureHeader << '\n';
  }

  void on_slot(const SlotTrace& trace) override {
    trace_sink_.on_slot(trace);
    departure_sink_.on_slot(trace);
  }

 private:
  std::ofstream trace_out_;
  std::ofstream departures_out_;
  TraceCsvSink trace_sink_;
  DepartureCsvSink departure_sink_;
};

void write_summary_file(const fs::path& path, const ExperimentConfig& config,
                        const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_output(path);
  write_config_header(out, config);
  out << kSummaryHeader << '\n';
  for (const SummaryRow& row : rows) write_summary_row(out, row);
}

int cmd_run(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  fs::create_directories(config.output_dir);
  const fs::path dir(config.output_dir);

  const RunSummary summary = run_experiment(
      config, [&](std::uint32_t replication) -> std::unique_ptr<TraceSink> {
        return std::make_unique<FileSink>(dir, replication, config);
      });

  const SummaryRow row = make_summary_row(config, summary);
  write_summary_file(dir / "summary.csv", config, {row});

  std::cout << kSummaryHeader << '\n';
  write_summary_row(std::cout, row);
  return 0;
}

std::vector<double> parse_grid(const std::string& csv, const char* flag) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(flag, "bad grid value '" + item + "'");
    }
  }
  if (grid.empty()) throw ConfigError(flag, "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw ConfigError(flag, "grid must be strictly increasing");
    }
  }
  return grid;
}

int cmd_sweep_lambda(const CommonArgs& args, const std::string& lambdas) {
  const std::vector<double> grid = parse_grid(lambdas, "--lambdas");
  ExperimentConfig base = resolve_config(args);
  fs::create_directories(base.output_dir);

  std::vector<SummaryRow> rows;
  for (const double lambda : grid) {
    ExperimentConfig config = base;
    config.arrival = ArrivalDistribution::poisson(lambda);
    config.validate();
    const RunSummary summary = run_experiment(config);
    rows.push_back(make_summary_row(config, summary));
    write_summary_row(std::cout, rows.back());
  }
  write_summary_file(fs::path(base.output_dir) / "sweep_lambda.csv", base,
                     rows);
  return 0;
}

int cmd_sweep_r(const CommonArgs& args, const std::string& rs) {
  const std::vector<double> grid = parse_grid(rs, "--rs");
  ExperimentConfig base = resolve_config(args);
  for (const double r : grid) {
    if (!(r > 0.0 && r <= kSphereDiameter)) {
      throw ConfigError("--rs", "r must lie in (0, 2R]");
    }
  }
  fs::create_directories(base.output_dir);

  std::vector<SummaryRow> rows;
  for (const double r : grid) {
    ExperimentConfig config = base;
    config.r = r;
    config.validate();
    const RunSummary summary = run_experiment(config);
    rows.push_back(make_summary_row(config, summary));
    write_summary_row(std::cout, rows.back());
  }
  write_summary_file(fs::path(base.output_dir) / "sweep_r.csv", base, rows);
  return 0;
}

int cmd_oracle(double lambda, double c, std::uint32_t n_max,
               const std::string& pmf_out) {
  const ChainOracleResult result =
      chain_oracle(ArrivalDistribution::poisson(lambda), c, n_max);
  std::cout << "lambda = " << csv_number(lambda) << '\n'
            << "c = " << csv_number(c) << '\n'
            << "n_max = " << n_max << '\n'
            << "mean_n = " << csv_number(result.mean_n) << '\n'
            << "mean_delay_littles = " << csv_number(result.mean_delay_littles)
            << '\n'
            << "truncation_mass = " << csv_number(result.truncation_mass)
            << '\n'
            << "balance_residual = " << csv_number(result.balance_residual)
            << '\n'
            << "iterations = " << result.iterations << '\n'
            << "reliable = " << (result.reliable ? "yes" : "no") << '\n';
  if (!pmf_out.empty()) {
    std::ofstream out = open_output(pmf_out);
    out << "# lambda = " << csv_number(lambda) << '\n'
        << "# c = " << csv_number(c) << '\n'
        << "# n_max = " << n_max << '\n'
        << "n,probability\n";
    for (std::size_t n = 0; n < result.stationary_pmf.size(); ++n) {
      out << n << ',' << csv_number(result.stationary_pmf[n]) << '\n';
    }
  }
  if (!result.reliable) {
    std::cerr << "oracle: truncation mass " << result.truncation_mass
              << " above tolerance; raise --nmax\n";
    return 1;
  }
  return 0;
}

int cmd_partition_audit(double r, std::uint64_t samples,
                        std::uint64_t pairs_per_cell, std::uint64_t seed) {
  if (!(r > 0.0)) throw ConfigError("--r", "must be > 0");
  const std::vector<PartitionCell> cells = partition_sphere(r);
  std::cout << "r = " << csv_number(r) << '\n'
            << "cells = " << cells.size() << '\n';

  Rng rng(seed);
  bool ok = true;

  // Diameter audit: sampled point pairs inside each cell.
  double worst = 0.0;
  for (const PartitionCell& cell : cells) {
    double max_chord = 0.0;
    for (std::uint64_t i = 0; i < pairs_per_cell; ++i) {
      const SpherePoint a = sample_in_cell(cell, rng);
      const SpherePoint b = sample_in_cell(cell, rng);
      max_chord = std::max(max_chord, chord_distance(a, b));
    }
    worst = std::max(worst, max_chord);
    if (max_chord > r) {
      std::cout << "cell " << cell.cell_id << ": sampled diameter "
                << csv_number(max_chord) << " exceeds r\n";
      ok = false;
    }
  }
  std::cout << "diameter_audit = " << (ok ? "pass" : "FAIL")
            << " (worst sampled chord " << csv_number(worst) << ")\n";

  // Coverage audit: uniform points, each contained in exactly one cell.
  std::uint64_t covered = 0;
  std::uint64_t unique = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const SpherePoint p = sample_uniform(rng);
    std::uint32_t hits = 0;
    for (const PartitionCell& cell : cells) {
      if (cell_contains(cell, p)) ++hits;
    }
    if (hits >= 1) ++covered;
    if (hits == 1) ++unique;
  }
  std::cout << "coverage_audit = "
            << (covered == samples ? "pass" : "FAIL") << " (" << covered << '/'
            << samples << " covered, " << unique << " uniquely)\n";
  if (covered != samples) ok = false;

  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spaloha: spatial random multiple access with multiple departure"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Run one experiment; writes trace, departure and summary CSVs");
  add_common_options(run_cmd, &run_args);

  CommonArgs sl_args;
  std::string lambdas;
  CLI::App* sweep_lambda_cmd = app.add_subcommand(
      "sweep-lambda", "Mean delay across a Poisson-rate grid (fixed r)");
  add_common_options(sweep_lambda_cmd, &sl_args);
  sweep_lambda_cmd
      ->add_option("--lambdas", lambdas, "Comma-separated increasing rates")
      ->required();

  CommonArgs sr_args;
  std::string rs;
  CLI::App* sweep_r_cmd = app.add_subcommand(
      "sweep-r", "Mean delay across a departure-radius grid (fixed arrivals)");
  add_common_options(sweep_r_cmd, &sr_args);
  sweep_r_cmd->add_option("--rs", rs, "Comma-separated increasing radii")
      ->required();

  double oracle_lambda = 1.0;
  double oracle_c = 1.0;
  std::uint32_t oracle_nmax = 2048;
  std::string oracle_pmf_out;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exact population chain for the full-clear regime (r >= 2R)");
  oracle_cmd->add_option("--lambda", oracle_lambda, "Poisson arrival rate")
      ->required();
  oracle_cmd->add_option("--c", oracle_c, "Protocol constant (p = c/N)");
  oracle_cmd->add_option("--nmax", oracle_nmax, "Truncation state");
  oracle_cmd->add_option("--pmf-out", oracle_pmf_out,
                         "Write the stationary pmf to this CSV file");

  double audit_r = 0.0;
  std::uint64_t audit_samples = 100000;
  std::uint64_t audit_pairs = 1000;
  std::uint64_t audit_seed = 1;
  CLI::App* audit_cmd = app.add_subcommand(
      "partition-audit", "Audit the diameter-<=r sphere partition");
  audit_cmd->add_option("--r", audit_r, "Cell diameter bound")->required();
  audit_cmd->add_option("--samples", audit_samples, "Coverage sample count");
  audit_cmd->add_option("--pairs", audit_pairs, "Point pairs per cell");
  audit_cmd->add_option("--seed", audit_seed, "Audit sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (sweep_lambda_cmd->parsed()) return cmd_sweep_lambda(sl_args, lambdas);
    if (sweep_r_cmd->parsed()) return cmd_sweep_r(sr_args, rs);
    if (oracle_cmd->parsed()) {
      return cmd_oracle(oracle_lambda, oracle_c, oracle_nmax, oracle_pmf_out);
    }
    if (audit_cmd->parsed()) {
      return cmd_partition_audit(audit_r, audit_samples, audit_pairs,
                                 audit_seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration field '" << e.field
              << "': " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
