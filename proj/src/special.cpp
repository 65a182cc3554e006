#include "fbel/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fbel/error.hpp"

namespace fbel::special {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  return a;
}

// sum_k (1-b)_k / k! x^(k+a) / (k+a); converges geometrically for x <= 1/2.
double lower_series(double x, double a, double b) {
  if (x == 0.0) return 0.0;
  double coeff = 1.0;
  double xk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double term = coeff * xk / (k + a);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 2) break;
    coeff *= (k + 1.0 - b) / (k + 1.0);
    xk *= x;
  }
  return sum * std::pow(x, a);
}

}  // namespace

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  if (x > 140.0) return std::exp(log_gamma(x));
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

double log_gamma(double x) {
  if (x <= 0.0) throw DomainError("log_gamma: argument must be positive");
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
  if (a + b < 140.0) return gamma(a) * gamma(b) / gamma(a + b);
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a, b must be positive");
  if (!(x >= 0.0) || x > 1.0) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  if (x <= 0.5) return lower_series(x, a, b);
  return beta(a, b) - lower_series(1.0 - x, b, a);
}

double incomplete_beta_upper(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta_upper: a, b must be positive");
  if (!(x >= 0.0) || x > 1.0) throw DomainError("incomplete_beta_upper: x must lie in [0, 1]");
  if (x >= 0.5) return lower_series(1.0 - x, b, a);
  return beta(a, b) - lower_series(x, a, b);
}

double incomplete_beta_between(double z0, double z1, double a, double b) {
  if (!(z0 <= z1)) throw DomainError("incomplete_beta_between: limits out of order");
  if (z1 <= 0.5) return incomplete_beta(z1, a, b) - incomplete_beta(z0, a, b);
  if (z0 >= 0.5) return incomplete_beta_upper(z0, a, b) - incomplete_beta_upper(z1, a, b);
  return (incomplete_beta(0.5, a, b) - incomplete_beta(z0, a, b)) +
         (incomplete_beta_upper(0.5, a, b) - incomplete_beta_upper(z1, a, b));
}

}  // namespace fbel::special
