#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spaloha/config.hpp"
#include "spaloha/geometry.hpp"

using namespace spaloha;

namespace {

ExperimentConfig from_canonical(const std::string& text) {
  ExperimentConfig config;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    const std::string key = line.substr(0, eq - 1);
    const std::string value = line.substr(eq + 2);
    apply_setting(config, key, value);
  }
  return config;
}

}  // namespace

TEST_CASE("defaults validate") {
  ExperimentConfig config;
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("settings apply and invalid values name the field") {
  ExperimentConfig config;
  apply_setting(config, "protocol", "a3");
  CHECK(config.protocol.kind == ProtocolKind::a3);
  apply_setting(config, "a1_c", "2.5");
  CHECK(config.protocol.a1_c == 2.5);
  apply_setting(config, "arrival", "poisson:7");
  CHECK(config.arrival.mean() == 7.0);
  apply_setting(config, "r", "0.3");
  CHECK(config.r == 0.3);
  apply_setting(config, "horizon", "12345");
  CHECK(config.horizon == 12345);
  apply_setting(config, "a3_h", "log");
  CHECK(config.protocol.a3_h == GrowthFunction::log);
  apply_setting(config, "a3_h", "sqrt");
  CHECK(config.protocol.a3_h == GrowthFunction::sqrt);
  apply_setting(config, "a3_h", "half");
  CHECK(config.protocol.a3_h == GrowthFunction::half);
  apply_setting(config, "a3_eps", "half");
  CHECK(config.protocol.a3_eps == EpsilonFunction::half);
  apply_setting(config, "a3_eps", "eighth");
  CHECK(config.protocol.a3_eps == EpsilonFunction::eighth);
  apply_setting(config, "a3_eps", "quarter");
  CHECK(config.protocol.a3_eps == EpsilonFunction::quarter);

  try {
    apply_setting(config, "horizon", "abc");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field == "horizon");
  }
  try {
    apply_setting(config, "no_such_key", "1");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field == "no_such_key");
  }
  try {
    apply_setting(config, "arrival", "weird:1");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field == "arrival");
  }
}

TEST_CASE("validation catches out-of-range fields by name") {
  ExperimentConfig config;
  config.r = kSphereDiameter + 0.01;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field == "r");
  }

  config = ExperimentConfig{};
  config.horizon = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.replications = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.warmup_fraction = 1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.protocol.a2_c1 = 1.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.protocol.a3_k0 = 0.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.r = 0.0;  // classical model, allowed
  CHECK_NOTHROW(config.validate());
  config.r = kSphereDiameter;  // full clear, allowed
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("canonical form round-trips and omits execution details") {
  ExperimentConfig config;
  config.protocol.kind = ProtocolKind::a2;
  config.arrival = ArrivalDistribution::parse("pmf:0:0.8,1:0.2");
  config.r = 0.25;
  config.horizon = 777;
  config.seed = 99;
  config.workers = 5;
  config.output_dir = "somewhere";

  const std::string text = config.canonical();
  CHECK(text.find("workers") == std::string::npos);
  CHECK(text.find("output_dir") == std::string::npos);

  const ExperimentConfig parsed = from_canonical(text);
  CHECK(parsed.canonical() == text);
  CHECK(parsed.horizon == 777);
  CHECK(parsed.seed == 99);
  CHECK(parsed.r == 0.25);
  CHECK(parsed.arrival.prob_zero() == doctest::Approx(0.8));
}

TEST_CASE("config files parse with comments and blank lines") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "spaloha_test_config.cfg";
  {
    std::ofstream out(path);
    out << "# experiment\n"
        << "protocol = a2\n"
        << "\n"
        << "a2_c1 = 0.4   # backoff factor\n"
        << "arrival = poisson:2\n"
        << "horizon = 5000\n";
  }
  const ExperimentConfig config = load_config_file(path);
  CHECK(config.protocol.kind == ProtocolKind::a2);
  CHECK(config.protocol.a2_c1 == 0.4);
  CHECK(config.arrival.mean() == 2.0);
  CHECK(config.horizon == 5000);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(load_config_file("/nonexistent/spaloha.cfg"), ConfigError);
}

TEST_CASE("protocol factory builds the configured class") {
  ProtocolConfig config;
  config.kind = ProtocolKind::a1;
  CHECK(make_protocol(config)->describe() == "a1;c=1");
  config.kind = ProtocolKind::a2;
  CHECK(make_protocol(config)->describe() == "a2;c1=0.5;c2=2");
  config.kind = ProtocolKind::a3;
  CHECK(make_protocol(config)->describe() == "a3;C=1;h=half;eps=quarter");
}
