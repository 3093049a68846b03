#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "spaloha/random.hpp"

using namespace spaloha;

namespace {

// Exact Binomial(n, p) pmf via Pascal's triangle; independent of the
// samplers under test.
std::vector<double> binomial_pmf(int n, double p) {
  std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    choose[i][0] = 1.0;
    for (int j = 1; j <= i; ++j) {
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }
  }
  std::vector<double> pmf(n + 1);
  for (int k = 0; k <= n; ++k) {
    pmf[k] = choose[n][k] * std::pow(p, k) * std::pow(1 - p, n - k);
  }
  return pmf;
}

double chi_square(const std::vector<std::uint64_t>& observed,
                  const std::vector<double>& pmf, std::uint64_t total) {
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = pmf[k] * static_cast<double>(total);
    const double d = static_cast<double>(observed[k]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace

TEST_CASE("streams are deterministic and substreams distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
  }
  CHECK(a.next_u64() != c.next_u64());

  CHECK(substream_seed(1, 0) == substream_seed(1, 0));
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(substream_seed(1, 0) != substream_seed(2, 0));
}

TEST_CASE("uniform01 stays in [0,1) and is symmetric") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 sigma band around 1/2, sigma = 1/sqrt(12 n).
  CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("below(n) is uniform over residues") {
  Rng rng(11);
  std::vector<std::uint64_t> counts(8, 0);
  const std::uint64_t total = 80000;
  for (std::uint64_t i = 0; i < total; ++i) ++counts[rng.below(8)];
  const std::vector<double> uniform(8, 1.0 / 8.0);
  // chi-square 0.99 critical value, 7 degrees of freedom
  CHECK(chi_square(counts, uniform, total) < 18.475);
}

TEST_CASE("poisson sampler moments") {
  Rng rng(5);
  const int n = 100000;
  const double lambda = 5.0;
  double sum = 0.0;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const int k = draw_poisson(lambda, rng);
    REQUIRE(k >= 0);
    sum += k;
    if (k == 0) ++zeros;
  }
  CHECK(std::abs(sum / n - lambda) < 3.0 * std::sqrt(lambda / n));
  const double p0 = std::exp(-lambda);
  CHECK(std::abs(static_cast<double>(zeros) / n - p0) <
        3.0 * std::sqrt(p0 * (1 - p0) / n) + 1e-9);
}

TEST_CASE("poisson sampler handles large rates by splitting") {
  Rng rng(9);
  const double lambda = 1200.0;
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) sum += draw_poisson(lambda, rng);
  CHECK(std::abs(sum / n - lambda) < 3.0 * std::sqrt(lambda / n));
}

TEST_CASE("binomial sampler edge cases") {
  Rng rng(3);
  CHECK(draw_binomial(0, 0.5, rng) == 0);
  CHECK(draw_binomial(10, 0.0, rng) == 0);
  CHECK(draw_binomial(10, 1.0, rng) == 10);
  for (int i = 0; i < 100; ++i) {
    const int b = draw_binomial(5, 0.4, rng);
    REQUIRE(b >= 0);
    REQUIRE(b <= 5);
  }
}

TEST_CASE("binomial inversion branch matches the exact pmf") {
  Rng rng(17);
  const int n = 6;
  const double p = 0.3;
  const std::uint64_t reps = 10000;
  std::vector<std::uint64_t> counts(n + 1, 0);
  for (std::uint64_t i = 0; i < reps; ++i) ++counts[draw_binomial(n, p, rng)];
  // chi-square 0.99 critical value, 6 degrees of freedom
  CHECK(chi_square(counts, binomial_pmf(n, p), reps) < 16.812);
}

TEST_CASE("binomial flip branch matches the exact pmf") {
  Rng rng(19);
  const int n = 6;
  const double p = 0.7;  // flipped internally to q = 0.3
  const std::uint64_t reps = 10000;
  std::vector<std::uint64_t> counts(n + 1, 0);
  for (std::uint64_t i = 0; i < reps; ++i) ++counts[draw_binomial(n, p, rng)];
  CHECK(chi_square(counts, binomial_pmf(n, p), reps) < 16.812);
}

TEST_CASE("binomial coin branch moments (n*q above inversion cutoff)") {
  Rng rng(23);
  const int n = 200;
  const double p = 0.48;  // n*q = 96, takes the per-trial path
  const int reps = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const int b = draw_binomial(n, p, rng);
    sum += b;
    sum2 += static_cast<double>(b) * b;
  }
  const double mean = sum / reps;
  const double var = sum2 / reps - mean * mean;
  const double true_mean = n * p;
  const double true_var = n * p * (1 - p);
  CHECK(std::abs(mean - true_mean) < 3.0 * std::sqrt(true_var / reps));
  CHECK(std::abs(var - true_var) <
        3.0 * true_var * std::sqrt(2.0 / (reps - 1)));
}
