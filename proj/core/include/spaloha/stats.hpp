#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace spaloha {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n - 1 denominator)
  double std_dev = 0.0;
};

Summary summarize(std::span<const double> values);

// Upper-tail Student-t quantile, e.g. student_t_quantile(0.975, 31). Exact
// via the regularized incomplete beta, bisected to ~1e-10.
double student_t_quantile(double p, int df);

struct IntervalEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% confidence, Student-t
  std::size_t batches = 0;
};

// Batch-means interval for a (possibly autocorrelated) sequence: the first
// batches*floor(n/batches) values are split into equal batches and the
// batch means are treated as an i.i.d. sample. Returns nothing when fewer
// than 2 values per batch are available.
std::optional<IntervalEstimate> batch_means(std::span<const double> values,
                                            int batches);
std::optional<IntervalEstimate> batch_means(
    std::span<const std::uint32_t> values, int batches);

// Mean and 95% t-interval of an i.i.d. sample (n >= 2).
IntervalEstimate t_interval(std::span<const double> values);

}  // namespace spaloha
