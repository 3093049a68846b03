#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spaloha {

// Seed of the stream assigned to replication `index`. The derivation is the
// splitmix64 output function applied to master + (index+1)*golden, i.e. the
// (index+1)-th value of a splitmix64 generator seeded with `master`. Changing
// the worker count never changes which stream a replication gets.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic random stream: std::mt19937_64 raw output (exactly specified
// by the standard) plus hand-rolled transforms, so a given seed yields the
// same draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1. Rejection sampling, exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  bool coin() { return (engine_() & 1ull) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Exact Poisson sampler (Knuth product-of-uniforms). Rates above 500 are
// split by Poisson additivity to keep exp(-rate) away from underflow.
inline int draw_poisson(double rate, Rng& rng) {
  if (rate <= 0.0) return 0;
  int total = 0;
  while (rate > 500.0) {
    const double limit = std::exp(-500.0);
    double prod = rng.uniform01();
    int k = 0;
    while (prod > limit) {
      ++k;
      prod *= rng.uniform01();
    }
    total += k;
    rate -= 500.0;
  }
  const double limit = std::exp(-rate);
  double prod = rng.uniform01();
  int k = 0;
  while (prod > limit) {
    ++k;
    prod *= rng.uniform01();
  }
  return total + k;
}

// Exact Binomial(n, p) sampler. Uses cdf inversion when n*min(p,1-p) is
// small (the common case here: p ~ c/N keeps the mean near c) and falls back
// to per-trial coins otherwise, where inversion from zero would underflow.
inline int draw_binomial(int n, double p, Rng& rng) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  int x = 0;
  if (static_cast<double>(n) * q <= 50.0) {
    const double ratio = q / (1.0 - q);
    double f = std::pow(1.0 - q, n);  // >= e^{-100} in this branch
    double cdf = f;
    const double u = rng.uniform01();
    while (u > cdf && x < n) {
      ++x;
      f *= ratio * static_cast<double>(n - x + 1) / static_cast<double>(x);
      cdf += f;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (rng.uniform01() < q) ++x;
    }
  }
  return flipped ? n - x : x;
}

}  // namespace spaloha
