#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fbel/frac_core.hpp"
#include "fbel/report.hpp"

namespace fbel {

/// int_0^min(t,s) K_H(t,u) K_H(s,u) du by tanh-sinh quadrature, which
/// tolerates the integrable endpoint singularities. Equals R_H(t, s).
double kernel_covariance_quadrature(HurstParam h, double t, double s);

struct ValidationOptions {
  HurstParam h{0.1};
  double horizon = 1.0;
  std::size_t steps = 256;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 12345;
};

/// Property checks: covariance of both samplers, kernel identity,
/// fractional-operator identities, shuffle identity, K_H^{-1} closed form,
/// Girsanov mean and the Gaussian-case deltas.
std::vector<ResultRow> validation_suite(const ValidationOptions& opts);

}  // namespace fbel
