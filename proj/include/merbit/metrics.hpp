#pragma once

#include <cmath>
#include <span>

#include "merbit/types.hpp"

namespace merbit {

// Computational throughput of one SpMV in FLOP/s: two operations (multiply,
// add) per stored nonzero divided by the runtime.
inline double computational_throughput(index_t nnz, double seconds) {
  if (seconds <= 0.0) {
    throw config_error("throughput needs a positive duration");
  }
  return 2.0 * static_cast<double>(nnz) / seconds;
}

// Baseline-relative speedup: time of the baseline over time of the kernel.
inline double speedup(double baseline_seconds, double kernel_seconds) {
  if (baseline_seconds <= 0.0 || kernel_seconds <= 0.0) {
    throw config_error("speedup needs positive durations");
  }
  return baseline_seconds / kernel_seconds;
}

// Geometric mean, the aggregate used for cross-dataset speedups.
inline double geometric_mean(std::span<const double> values) {
  if (values.empty()) {
    throw config_error("geometric mean of an empty set");
  }
  double log_sum = 0.0;
  for (double v : values) {
    if (v <= 0.0) {
      throw config_error("geometric mean requires positive values");
    }
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace merbit
