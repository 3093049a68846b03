#include "spaloha/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace spaloha {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0.0;
    for (const double v : values) {
      const double d = v - s.mean;
      ss += d * d;
    }
    s.variance = ss / static_cast<double>(s.n - 1);
    s.std_dev = std::sqrt(s.variance);
  }
  return s;
}

namespace {

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

// P(T <= t) for Student-t with df degrees of freedom, t >= 0.
double student_t_cdf_upper_half(double t, int df) {
  const double x = df / (df + t * t);
  return 1.0 - 0.5 * incomplete_beta(0.5 * df, 0.5, x);
}

}  // namespace

double student_t_quantile(double p, int df) {
  if (df < 1) throw std::domain_error("student_t_quantile: df must be >= 1");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("student_t_quantile: p must be in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double target = upper ? p : 1.0 - p;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf_upper_half(hi, df) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf_upper_half(mid, df) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double q = 0.5 * (lo + hi);
  return upper ? q : -q;
}

namespace {

template <typename T>
std::optional<IntervalEstimate> batch_means_impl(std::span<const T> values,
                                                 int batches) {
  if (batches < 2) return std::nullopt;
  const std::size_t per_batch = values.size() / static_cast<std::size_t>(batches);
  if (per_batch < 2) return std::nullopt;
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    double sum = 0.0;
    const std::size_t begin = static_cast<std::size_t>(b) * per_batch;
    for (std::size_t i = begin; i < begin + per_batch; ++i) {
      sum += static_cast<double>(values[i]);
    }
    means.push_back(sum / static_cast<double>(per_batch));
  }
  return t_interval(means);
}

}  // namespace

std::optional<IntervalEstimate> batch_means(std::span<const double> values,
                                            int batches) {
  return batch_means_impl(values, batches);
}

std::optional<IntervalEstimate> batch_means(
    std::span<const std::uint32_t> values, int batches) {
  return batch_means_impl(values, batches);
}

IntervalEstimate t_interval(std::span<const double> values) {
  const Summary s = summarize(values);
  IntervalEstimate est;
  est.mean = s.mean;
  est.batches = s.n;
  if (s.n >= 2) {
    const double t = student_t_quantile(0.975, static_cast<int>(s.n) - 1);
    est.half_width = t * s.std_dev / std::sqrt(static_cast<double>(s.n));
  }
  return est;
}

}  // namespace spaloha
