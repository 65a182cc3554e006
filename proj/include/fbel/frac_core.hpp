#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fbel {

/// Hurst exponent restricted to the rough regime 0 < h < 1/2.
class HurstParam {
 public:
  explicit HurstParam(double h);

  double value() const noexcept { return h_; }

  /// h < 1/(2(d+2)): the singular SDE has a unique strong solution and the
  /// delta representation applies for almost every initial point.
  bool strong_solution_valid(std::size_t dim) const noexcept;
  /// h < 1/(2(d+3)): the representation admits a version continuous in x.
  bool continuous_version_valid(std::size_t dim) const noexcept;

  static double strong_solution_threshold(std::size_t dim) noexcept;
  static double continuous_version_threshold(std::size_t dim) noexcept;

 private:
  double h_;
};

/// Order of a Riemann-Liouville operator, 0 < alpha <= 1.
class FracOrder {
 public:
  explicit FracOrder(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// coef (x - a)^exponent, a = grid start.
struct PowerTerm {
  double coef;
  double exponent;
};

/// Real samples on a strictly increasing grid.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;
  /// Power-law parts already contained in values. The fractional operators
  /// record the terms they create (I^alpha of f(a) is f(a) (x-a)^alpha /
  /// Gamma(1+alpha)) and apply themselves to these parts in closed form, so a
  /// non-smooth start does not cost accuracy in a chain of operators. Clear
  /// it when editing values by hand.
  std::vector<PowerTerm> leading;

  SampledFunction() = default;
  SampledFunction(std::vector<double> grid_, std::vector<double> values_);

  std::size_t size() const noexcept { return grid.size(); }
  /// Piecewise-linear interpolation, constant extrapolation outside the grid.
  double interpolate(double t) const;
};

/// Uniform grid [0, horizon] with n cells sampled from a callable.
template <class F>
SampledFunction sample_uniform(double horizon, std::size_t cells, F&& f) {
  std::vector<double> grid(cells + 1), values(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    grid[i] = horizon * static_cast<double>(i) / static_cast<double>(cells);
    values[i] = f(grid[i]);
  }
  return SampledFunction(std::move(grid), std::move(values));
}

/// fBm covariance R_H(t, s) = (t^2H + s^2H - |t-s|^2H) / 2.
double cov_rh(HurstParam h, double t, double s);

/// Normalizing constant c_H of the Volterra kernel.
double c_h(HurstParam h);

/// Constant C_H = 1 / (c_H Gamma(1/2+H) Gamma(1/2-H)) of the Malliavin weight.
double big_c_h(HurstParam h);

/// Volterra kernel K_H(t, s), 0 < s < t.
double kernel_kh(HurstParam h, double t, double s);

/// K_H(t, s) = c_H t^(H-1/2) profile(s/t); profile is the dimensionless shape.
double kernel_profile(HurstParam h, double x);

/// Antiderivative of kernel_profile on [0, 1], zero at 0. Gives exact cell
/// integrals of K_H(t, .) through
///   int_a^b K_H(t, s) ds = c_H t^(H+1/2) [P(b/t) - P(a/t)].
double kernel_profile_integral(HurstParam h, double x);

/// Left Riemann-Liouville integral I^alpha_{a+} f on f's own grid, a = grid
/// start. Product integration: f minus its leading terms piecewise linear,
/// power kernel exact per cell; leading terms exactly.
SampledFunction frac_int_left(FracOrder alpha, const SampledFunction& f);

/// Left Riemann-Liouville derivative in Marchaud form. Product integration
/// with piecewise-linear f plus starting weights on the first four nodes that
/// make the rule exact on 1, y^alpha, y and y^(1+alpha) (y = x - a), the local
/// shape of I^alpha g for smooth g. At the grid start the one-sided limit is
/// returned: linear extrapolation of the first two interior values when
/// f(a) = 0, signed infinity otherwise. Leading terms are differentiated in
/// closed form. alpha = 1 gives the backward difference.
SampledFunction frac_deriv_left(FracOrder alpha, const SampledFunction& f);

/// K_H^{-1} applied to phi with phi(0) = 0, given phi' on a grid starting at 0:
///   s^(H-1/2) I^{1/2-H}_{0+}[ s^(1/2-H) phi'(s) ](s),   value 0 at s = 0.
/// phi' is taken piecewise linear; the weight s^(1/2-H) and the kernel are
/// integrated exactly per cell.
SampledFunction kh_inverse_ac(HurstParam h, const SampledFunction& phi_prime);

/// kh_inverse_ac inverts the operator I^{2H} s^(1/2-H) I^{1/2-H} s^(H-1/2),
/// which is K_H / (c_H Gamma(H+1/2)) for the normalized kernel above:
///   int_0^t K_H(t, s) kh_inverse_ac(phi')(s) ds = c_H Gamma(H+1/2) phi(t).
/// Multiply by this factor, 1 / (c_H Gamma(H+1/2)), to invert K_H itself.
double kh_inverse_normalization(HurstParam h);

/// kh_inverse_ac on a uniform grid with the per-node weights tabulated once,
/// for repeated application along many paths.
class UniformKhInverse {
 public:
  static constexpr std::size_t kMaxCells = 4096;

  UniformKhInverse(HurstParam h, double step, std::size_t cells);

  /// out[i] = (K_H^{-1} phi)(x_i) for samples phi'[0..cells].
  void apply(std::span<const double> phi_prime, std::span<double> out) const;
  std::size_t cells() const noexcept { return cells_; }

 private:
  std::size_t cells_;
  std::vector<double> coef_;  // row i holds the weights of phi'[0..i]
};

/// Toeplitz product-integration weights for I^alpha on a uniform grid, so
/// repeated application costs one multiply-add per pair (i, j).
class UniformFracIntegral {
 public:
  UniformFracIntegral(FracOrder alpha, double step, std::size_t cells);

  /// out[i] = (I^alpha f)(x_i) for samples f[0..cells].
  void apply(std::span<const double> f, std::span<double> out) const;
  std::size_t cells() const noexcept { return cells_; }

 private:
  std::size_t cells_;
  // value at node x_i = sum_m left_[m] f[i-m-1] + right_[m] f[i-m]
  std::vector<double> left_;
  std::vector<double> right_;
};

struct ShuffleResult {
  double lhs;
  double rhs;
};

/// Both sides of the two-function shuffle identity on [theta, t]:
///   (int f1)(int f2) = int_{theta<s2<s1<t} f1(s1) f2(s2) + f2(s1) f1(s2).
/// The piecewise-linear interpolants of f1, f2 are integrated exactly, so the
/// two sides agree to rounding and each approximates the true integral to
/// O(step^2).
ShuffleResult shuffle_check(const SampledFunction& f1, const SampledFunction& f2,
                            double theta, double t);

}  // namespace fbel
