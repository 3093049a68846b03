#include "spaloha/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spaloha/geometry.hpp"

namespace spaloha {

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& config) {
  switch (config.kind) {
    case ProtocolKind::a1:
      return make_a1(ProtocolStateA1{config.a1_c});
    case ProtocolKind::a2:
      return make_a2(ProtocolStateA2{config.a2_c1, config.a2_c2, config.a2_p0});
    case ProtocolKind::a3:
      return make_a3(ProtocolStateA3{config.a3_c, config.a3_k0, config.a3_h,
                                     config.a3_eps});
  }
  throw ConfigError("protocol", "unknown protocol kind");
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key, "not a number: '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key, "not a non-negative integer: '" + value + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  if (key == "protocol") {
    if (value == "a1") config.protocol.kind = ProtocolKind::a1;
    else if (value == "a2") config.protocol.kind = ProtocolKind::a2;
    else if (value == "a3") config.protocol.kind = ProtocolKind::a3;
    else throw ConfigError(key, "expected a1, a2 or a3, got '" + value + "'");
  } else if (key == "a1_c") {
    config.protocol.a1_c = parse_double(key, value);
  } else if (key == "a2_c1") {
    config.protocol.a2_c1 = parse_double(key, value);
  } else if (key == "a2_c2") {
    config.protocol.a2_c2 = parse_double(key, value);
  } else if (key == "a2_p0") {
    config.protocol.a2_p0 = parse_double(key, value);
  } else if (key == "a3_c") {
    config.protocol.a3_c = parse_double(key, value);
  } else if (key == "a3_k0") {
    config.protocol.a3_k0 = parse_double(key, value);
  } else if (key == "a3_h") {
    if (value == "sqrt") config.protocol.a3_h = GrowthFunction::sqrt;
    else if (value == "log") config.protocol.a3_h = GrowthFunction::log;
    else if (value == "half") config.protocol.a3_h = GrowthFunction::half;
    else throw ConfigError(key, "expected sqrt, log or half, got '" + value + "'");
  } else if (key == "a3_eps") {
    if (value == "quarter") config.protocol.a3_eps = EpsilonFunction::quarter;
    else if (value == "half") config.protocol.a3_eps = EpsilonFunction::half;
    else if (value == "eighth") config.protocol.a3_eps = EpsilonFunction::eighth;
    else throw ConfigError(key, "expected quarter, half or eighth, got '" +
                                    value + "'");
  } else if (key == "arrival") {
    try {
      config.arrival = ArrivalDistribution::parse(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "r") {
    config.r = parse_double(key, value);
  } else if (key == "horizon") {
    config.horizon = parse_u64(key, value);
  } else if (key == "replications") {
    config.replications = static_cast<std::uint32_t>(parse_u64(key, value));
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "warmup_fraction") {
    config.warmup_fraction = parse_double(key, value);
  } else if (key == "initial_population") {
    config.initial_population =
        static_cast<std::uint32_t>(parse_u64(key, value));
  } else if (key == "batches") {
    config.batches = static_cast<std::uint32_t>(parse_u64(key, value));
  } else if (key == "workers") {
    config.workers = static_cast<std::uint32_t>(parse_u64(key, value));
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

void ExperimentConfig::validate() const {
  if (!(protocol.a1_c > 0.0)) {
    throw ConfigError("a1_c", "must be > 0");
  }
  if (!(protocol.a2_c1 > 0.0 && protocol.a2_c1 < 1.0)) {
    throw ConfigError("a2_c1", "must be in (0, 1)");
  }
  if (!(protocol.a2_c2 > 1.0)) {
    throw ConfigError("a2_c2", "must be > 1");
  }
  if (!(protocol.a2_p0 > 0.0 && protocol.a2_p0 <= 1.0)) {
    throw ConfigError("a2_p0", "must be in (0, 1]");
  }
  if (!(protocol.a3_c > 0.0)) {
    throw ConfigError("a3_c", "must be > 0");
  }
  if (!(protocol.a3_k0 >= 1.0)) {
    throw ConfigError("a3_k0", "must be >= 1");
  }
  if (!(r >= 0.0)) {
    throw ConfigError("r", "must be >= 0");
  }
  if (r > kSphereDiameter) {
    throw ConfigError("r", "exceeds the sphere diameter 2R = " +
                               format_number(kSphereDiameter));
  }
  if (horizon == 0) {
    throw ConfigError("horizon", "must be > 0");
  }
  if (replications < 1) {
    throw ConfigError("replications", "must be >= 1");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw ConfigError("warmup_fraction", "must be in [0, 1)");
  }
  if (batches < 2) {
    throw ConfigError("batches", "must be >= 2");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "protocol = ";
  switch (protocol.kind) {
    case ProtocolKind::a1: out << "a1"; break;
    case ProtocolKind::a2: out << "a2"; break;
    case ProtocolKind::a3: out << "a3"; break;
  }
  out << '\n';
  out << "a1_c = " << format_number(protocol.a1_c) << '\n';
  out << "a2_c1 = " << format_number(protocol.a2_c1) << '\n';
  out << "a2_c2 = " << format_number(protocol.a2_c2) << '\n';
  out << "a2_p0 = " << format_number(protocol.a2_p0) << '\n';
  out << "a3_c = " << format_number(protocol.a3_c) << '\n';
  out << "a3_k0 = " << format_number(protocol.a3_k0) << '\n';
  out << "a3_h = " << growth_name(protocol.a3_h) << '\n';
  out << "a3_eps = " << epsilon_name(protocol.a3_eps) << '\n';
  out << "arrival = " << arrival.describe() << '\n';
  out << "r = " << format_number(r) << '\n';
  out << "horizon = " << horizon << '\n';
  out << "replications = " << replications << '\n';
  out << "seed = " << seed << '\n';
  out << "warmup_fraction = " << format_number(warmup_fraction) << '\n';
  out << "initial_population = " << initial_population << '\n';
  out << "batches = " << batches << '\n';
  // workers and output_dir are execution details, not part of the
  // experiment: leaving them out keeps outputs byte-identical across
  // worker counts and output locations.
  return out.str();
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", "cannot open '" + path.string() + "'");
  }
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) +
                                      ": expected KEY = VALUE");
    }
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace spaloha
