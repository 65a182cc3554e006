#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fbel {

/// Worker count: FBEL_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers. Exceptions are
/// rethrown on the caller, lowest index first.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

/// Mean and standard error (sample standard deviation / sqrt(n)) of values,
/// both accumulated with compensated sums in index order.
struct MeanStderr {
  double mean;
  double std_error;
};
MeanStderr mean_stderr(std::span<const double> values);

}  // namespace fbel
