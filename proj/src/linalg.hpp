#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace fbel::detail {

inline constexpr std::size_t kNoFailure = std::numeric_limits<std::size_t>::max();

inline std::size_t packed_index(std::size_t row, std::size_t col) { return row * (row + 1) / 2 + col; }

/// In-place Cholesky of a packed lower triangle (row-major). Returns the
/// failing pivot index or kNoFailure.
std::size_t cholesky_packed(std::vector<double>& a, std::size_t n);

/// Factorizes a copy of cov, adding an absolute diagonal jitter after a failure.
/// Tries each jitter in order; returns the jitter that succeeded.
/// Throws NumericalError with the failing pivot once all are exhausted.
double cholesky_with_jitter(const std::vector<double>& cov, std::size_t n,
                            std::vector<double>& factor, const std::vector<double>& jitters,
                            const char* what);

}  // namespace fbel::detail
