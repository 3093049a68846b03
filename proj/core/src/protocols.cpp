#include "spaloha/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace spaloha {

double a1_probability(const ProtocolStateA1& state, std::uint64_t n_messages) {
  if (n_messages == 0) return 1.0;
  return std::min(1.0, state.c / static_cast<double>(n_messages));
}

ProtocolStateA2 a2_update(ProtocolStateA2 state, const FeedbackSignal& fb) {
  switch (fb.ternary()) {
    case Ternary::collision:
      state.p = state.c1 * state.p;
      break;
    case Ternary::success:
      break;
    case Ternary::empty:
      state.p = std::min(1.0, state.c2 * state.p);
      break;
  }
  return state;
}

double eval_growth(GrowthFunction h, double x) {
  switch (h) {
    case GrowthFunction::sqrt:
      return std::sqrt(x);
    case GrowthFunction::log:
      return std::log1p(x);
    case GrowthFunction::half:
      return 0.5 * x;
  }
  return 0.0;
}

double eval_epsilon(EpsilonFunction eps, double x) {
  switch (eps) {
    case EpsilonFunction::quarter:
      return std::min(0.5, std::pow(x, -0.25));
    case EpsilonFunction::half:
      return std::min(0.5, 1.0 / std::sqrt(x));
    case EpsilonFunction::eighth:
      return std::min(0.5, std::pow(x, -0.125));
  }
  return 0.0;
}

const char* growth_name(GrowthFunction h) {
  switch (h) {
    case GrowthFunction::sqrt:
      return "sqrt";
    case GrowthFunction::log:
      return "log";
    case GrowthFunction::half:
      return "half";
  }
  return "?";
}

const char* epsilon_name(EpsilonFunction eps) {
  switch (eps) {
    case EpsilonFunction::quarter:
      return "quarter";
    case EpsilonFunction::half:
      return "half";
    case EpsilonFunction::eighth:
      return "eighth";
  }
  return "?";
}

double a3_probability(const ProtocolStateA3& state, int coin) {
  if (coin == 1) return 1.0 / state.k;
  return (1.0 - eval_epsilon(state.eps, state.k)) / state.k;
}

ProtocolStateA3 a3_update(ProtocolStateA3 state, const FeedbackSignal& fb,
                          int coin) {
  if (!fb.success()) {
    state.k += state.c;
  } else if (coin == 0) {
    state.k += eval_growth(state.h, state.k);
  } else {
    state.k = std::max(state.k - eval_growth(state.h, state.k), 1.0);
  }
  return state;
}

double success_probability(std::uint64_t k, double p) {
  if (k == 0) return 0.0;
  // pow(0, 0) == 1 covers the k = 1, p = 1 corner.
  return static_cast<double>(k) * p *
         std::pow(1.0 - p, static_cast<double>(k - 1));
}

double b_min(double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw std::domain_error("b_min: c must be in (0, 1]");
  }
  // The sequence decreases towards c e^{-c} on (0, 1]; the scan guards the
  // comparison against the analytic limit rather than replacing it.
  double minimum = c * std::exp(-c);
  for (std::uint64_t k = 1; k <= 100000; ++k) {
    const double p = std::min(1.0, c / static_cast<double>(k));
    minimum = std::min(minimum, success_probability(k, p));
  }
  return minimum;
}

namespace {

std::string format_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class A1Controller final : public Protocol {
 public:
  explicit A1Controller(ProtocolStateA1 state) : state_(state) {}

  FeedbackLevel feedback_level() const override { return FeedbackLevel::exact; }
  bool centralised() const override { return true; }

  double transmit_probability(const PopulationView& population,
                              Rng&) override {
    return a1_probability(state_, population.count());
  }

  void observe(const FeedbackSignal&) override {}

  std::string describe() const override {
    return "a1;c=" + format_param(state_.c);
  }

 private:
  ProtocolStateA1 state_;
};

class A2Controller final : public Protocol {
 public:
  explicit A2Controller(ProtocolStateA2 state) : state_(state) {}

  FeedbackLevel feedback_level() const override {
    return FeedbackLevel::ternary;
  }
  bool centralised() const override { return false; }

  double transmit_probability(const PopulationView&, Rng&) override {
    return state_.p;
  }

  void observe(const FeedbackSignal& fb) override {
    state_ = a2_update(state_, fb);
  }

  std::string describe() const override {
    return "a2;c1=" + format_param(state_.c1) +
           ";c2=" + format_param(state_.c2);
  }

 private:
  ProtocolStateA2 state_;
};

class A3Controller final : public Protocol {
 public:
  explicit A3Controller(ProtocolStateA3 state) : state_(state) {}

  FeedbackLevel feedback_level() const override {
    return FeedbackLevel::binary;
  }
  bool centralised() const override { return false; }

  double transmit_probability(const PopulationView&, Rng& rng) override {
    last_coin_ = rng.coin() ? 1 : 0;
    return a3_probability(state_, last_coin_);
  }

  void observe(const FeedbackSignal& fb) override {
    state_ = a3_update(state_, fb, last_coin_);
  }

  std::string describe() const override {
    return std::string("a3;C=") + format_param(state_.c) +
           ";h=" + growth_name(state_.h) + ";eps=" + epsilon_name(state_.eps);
  }

 private:
  ProtocolStateA3 state_;
  int last_coin_ = 0;
};

}  // namespace

std::unique_ptr<Protocol> make_a1(ProtocolStateA1 state) {
  return std::make_unique<A1Controller>(state);
}

std::unique_ptr<Protocol> make_a2(ProtocolStateA2 state) {
  return std::make_unique<A2Controller>(state);
}

std::unique_ptr<Protocol> make_a3(ProtocolStateA3 state) {
  return std::make_unique<A3Controller>(state);
}

}  // namespace spaloha
