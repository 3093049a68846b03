#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "spaloha/protocols.hpp"
#include "spaloha/traffic.hpp"

namespace spaloha {

// Config rejection carrying the offending key.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(field_name + ": " + message),
        field(std::move(field_name)) {}
  std::string field;
};

enum class ProtocolKind { a1, a2, a3 };

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::a1;
  double a1_c = 1.0;
  double a2_c1 = 0.5;
  double a2_c2 = 2.0;
  double a2_p0 = 1.0;
  double a3_c = 1.0;
  double a3_k0 = 1.0;
  GrowthFunction a3_h = GrowthFunction::half;
  EpsilonFunction a3_eps = EpsilonFunction::quarter;
};

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& config);

// One experiment: protocol, traffic, departure radius, horizon and
// reproducibility knobs. Parsed from a flat key=value file with '#'
// comments; any key can be overridden from the command line.
struct ExperimentConfig {
  ProtocolConfig protocol;
  ArrivalDistribution arrival = ArrivalDistribution::poisson(1.0);
  double r = 0.2;
  std::uint64_t horizon = 100000;
  std::uint32_t replications = 1;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.2;
  std::uint32_t initial_population = 0;
  std::uint32_t batches = 32;
  std::uint32_t workers = 0;  // 0 = all hardware threads
  std::string output_dir = "out";

  std::uint64_t warmup_slots() const {
    return static_cast<std::uint64_t>(warmup_fraction *
                                      static_cast<double>(horizon));
  }

  // Throws ConfigError naming the field that violates its constraint.
  void validate() const;

  // Every key with its resolved value, one "key = value" line each, in a
  // fixed order. Embedded as the header of every output file.
  std::string canonical() const;
};

// Applies one key=value setting. Unknown keys or unparseable values throw
// ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);

ExperimentConfig load_config_file(const std::filesystem::path& path);

}  // namespace spaloha
