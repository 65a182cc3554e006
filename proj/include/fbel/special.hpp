#pragma once

// Gamma, Beta and incomplete Beta functions used by the kernel and the
// fractional operators. Self-contained so that tests can check them against
// the standard library as an independent implementation.

namespace fbel::special {

/// Gamma function for real x, not a non-positive integer. Lanczos
/// approximation (g = 7, 9 terms) with reflection below 1/2.
double gamma(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Beta function B(a, b) for a, b > 0.
double beta(double a, double b);

/// Non-regularized lower incomplete Beta integral
///   B_x(a, b) = int_0^x y^(a-1) (1-y)^(b-1) dy,   0 <= x <= 1, a, b > 0.
/// Evaluated by the binomial series on the side of 1/2 where it converges
/// geometrically, so no quadrature error enters.
double incomplete_beta(double x, double a, double b);

/// Upper tail int_x^1 y^(a-1) (1-y)^(b-1) dy without cancellation near x = 1.
double incomplete_beta_upper(double x, double a, double b);

/// int_z0^z1 y^(a-1) (1-y)^(b-1) dy, 0 <= z0 <= z1 <= 1, taking each end
/// from the series that is accurate on its side of 1/2.
double incomplete_beta_between(double z0, double z1, double a, double b);

}  // namespace fbel::special
