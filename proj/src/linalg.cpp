#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbel/error.hpp"

namespace fbel::detail {

std::size_t cholesky_packed(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double* row_j = &a[packed_index(j, 0)];
    double d = row_j[j];
    for (std::size_t k = 0; k < j; ++k) d -= row_j[k] * row_j[k];
    if (!(d > 0.0)) return j;
    const double ljj = std::sqrt(d);
    row_j[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double* row_i = &a[packed_index(i, 0)];
      double s = row_i[j];
      for (std::size_t k = 0; k < j; ++k) s -= row_i[k] * row_j[k];
      row_i[j] = s / ljj;
    }
  }
  return kNoFailure;
}

double cholesky_with_jitter(const std::vector<double>& cov, std::size_t n, std::vector<double>& factor,
                            const std::vector<double>& jitters, const char* what) {
  std::size_t pivot = kNoFailure;
  for (double jitter : jitters) {
    factor = cov;
    if (jitter > 0.0) {
      for (std::size_t i = 0; i < n; ++i) factor[packed_index(i, i)] += jitter;
    }
    pivot = cholesky_packed(factor, n);
    if (pivot == kNoFailure) return jitter;
  }
  throw NumericalError(std::string(what) + ": covariance not positive definite at pivot " +
                           std::to_string(pivot),
                       pivot);
}

}  // namespace fbel::detail
