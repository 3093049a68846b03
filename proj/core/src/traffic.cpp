#include "spaloha/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace spaloha {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_number(std::string_view text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("arrival: bad ") + what + " '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

ArrivalDistribution ArrivalDistribution::poisson(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("arrival: poisson rate must be > 0");
  }
  return ArrivalDistribution(ArrivalKind::poisson, rate, {});
}

ArrivalDistribution ArrivalDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("arrival: bernoulli p must be in [0, 1]");
  }
  return ArrivalDistribution(ArrivalKind::bernoulli, p, {});
}

ArrivalDistribution ArrivalDistribution::deterministic(int count) {
  if (count < 0) {
    throw std::invalid_argument("arrival: deterministic count must be >= 0");
  }
  return ArrivalDistribution(ArrivalKind::deterministic,
                             static_cast<double>(count), {});
}

ArrivalDistribution ArrivalDistribution::finite_pmf(
    std::vector<std::pair<int, double>> table) {
  if (table.empty()) {
    throw std::invalid_argument("arrival: pmf table is empty");
  }
  std::sort(table.begin(), table.end());
  double sum = 0.0;
  int prev = -1;
  for (const auto& [count, prob] : table) {
    if (count < 0) throw std::invalid_argument("arrival: pmf count < 0");
    if (count == prev) {
      throw std::invalid_argument("arrival: duplicate pmf count");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
      throw std::invalid_argument("arrival: pmf probability outside [0, 1]");
    }
    sum += prob;
    prev = count;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("arrival: pmf probabilities do not sum to 1");
  }
  return ArrivalDistribution(ArrivalKind::finite_pmf, 0.0, std::move(table));
}

ArrivalDistribution ArrivalDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("arrival: expected 'kind:params', got '" +
                                std::string(spec) + "'");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view params = spec.substr(colon + 1);
  if (kind == "poisson") return poisson(parse_number(params, "rate"));
  if (kind == "bernoulli") return bernoulli(parse_number(params, "p"));
  if (kind == "deterministic") {
    const double v = parse_number(params, "count");
    if (v != std::floor(v)) {
      throw std::invalid_argument("arrival: deterministic count not integer");
    }
    return deterministic(static_cast<int>(v));
  }
  if (kind == "pmf") {
    std::vector<std::pair<int, double>> table;
    std::string_view rest = params;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view entry = rest.substr(0, comma);
      const auto sep = entry.find(':');
      if (sep == std::string_view::npos) {
        throw std::invalid_argument("arrival: pmf entry must be COUNT:PROB");
      }
      const double c = parse_number(entry.substr(0, sep), "pmf count");
      if (c != std::floor(c)) {
        throw std::invalid_argument("arrival: pmf count not integer");
      }
      table.emplace_back(static_cast<int>(c),
                         parse_number(entry.substr(sep + 1), "pmf prob"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return finite_pmf(std::move(table));
  }
  throw std::invalid_argument("arrival: unknown kind '" + std::string(kind) +
                              "'");
}

double ArrivalDistribution::mean() const {
  switch (kind_) {
    case ArrivalKind::poisson:
    case ArrivalKind::bernoulli:
    case ArrivalKind::deterministic:
      return rate_;
    case ArrivalKind::finite_pmf: {
      double m = 0.0;
      for (const auto& [count, prob] : table_) m += count * prob;
      return m;
    }
  }
  return 0.0;
}

double ArrivalDistribution::prob_zero() const {
  switch (kind_) {
    case ArrivalKind::poisson:
      return std::exp(-rate_);
    case ArrivalKind::bernoulli:
      return 1.0 - rate_;
    case ArrivalKind::deterministic:
      return rate_ == 0.0 ? 1.0 : 0.0;
    case ArrivalKind::finite_pmf:
      return pmf(0);
  }
  return 0.0;
}

double ArrivalDistribution::pmf(int count) const {
  if (count < 0) return 0.0;
  switch (kind_) {
    case ArrivalKind::poisson: {
      // exp(-rate) * rate^k / k! by stable log-space evaluation.
      double log_p = -rate_;
      for (int i = 1; i <= count; ++i) {
        log_p += std::log(rate_) - std::log(static_cast<double>(i));
      }
      return std::exp(log_p);
    }
    case ArrivalKind::bernoulli:
      if (count == 0) return 1.0 - rate_;
      if (count == 1) return rate_;
      return 0.0;
    case ArrivalKind::deterministic:
      return count == static_cast<int>(rate_) ? 1.0 : 0.0;
    case ArrivalKind::finite_pmf: {
      for (const auto& [c, prob] : table_) {
        if (c == count) return prob;
      }
      return 0.0;
    }
  }
  return 0.0;
}

std::vector<double> ArrivalDistribution::pmf_table(int n) const {
  std::vector<double> table(static_cast<std::size_t>(n) + 1, 0.0);
  if (kind_ == ArrivalKind::poisson) {
    table[0] = std::exp(-rate_);
    for (int k = 1; k <= n; ++k) {
      table[static_cast<std::size_t>(k)] =
          table[static_cast<std::size_t>(k - 1)] * rate_ / k;
    }
  } else {
    for (int k = 0; k <= n; ++k) table[static_cast<std::size_t>(k)] = pmf(k);
  }
  return table;
}

int ArrivalDistribution::draw(Rng& rng) const {
  switch (kind_) {
    case ArrivalKind::poisson:
      return draw_poisson(rate_, rng);
    case ArrivalKind::bernoulli:
      return rng.uniform01() < rate_ ? 1 : 0;
    case ArrivalKind::deterministic:
      return static_cast<int>(rate_);
    case ArrivalKind::finite_pmf: {
      const double u = rng.uniform01();
      double cdf = 0.0;
      for (const auto& [count, prob] : table_) {
        cdf += prob;
        if (u < cdf) return count;
      }
      return table_.back().first;
    }
  }
  return 0;
}

std::string ArrivalDistribution::describe() const {
  switch (kind_) {
    case ArrivalKind::poisson:
      return "poisson:" + format_number(rate_);
    case ArrivalKind::bernoulli:
      return "bernoulli:" + format_number(rate_);
    case ArrivalKind::deterministic:
      return "deterministic:" + std::to_string(static_cast<int>(rate_));
    case ArrivalKind::finite_pmf: {
      std::string out = "pmf:";
      bool first = true;
      for (const auto& [count, prob] : table_) {
        if (!first) out += ',';
        out += std::to_string(count) + ':' + format_number(prob);
        first = false;
      }
      return out;
    }
  }
  return "";
}

ArrivalBatch draw_batch(const ArrivalDistribution& dist, std::uint64_t slot,
                        Rng& rng) {
  ArrivalBatch batch;
  batch.slot = slot;
  batch.count = static_cast<std::uint32_t>(dist.draw(rng));
  batch.locations.reserve(batch.count);
  for (std::uint32_t i = 0; i < batch.count; ++i) {
    batch.locations.push_back(sample_uniform(rng));
  }
  return batch;
}

}  // namespace spaloha
