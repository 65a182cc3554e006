#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fbel/fbm_engine.hpp"

namespace fbel {

/// Drift field b(t, x) of dX = b(t, X) dt + dB^H. Built-in kinds act on each
/// coordinate separately; custom fields may couple coordinates.
class DriftSpec {
 public:
  enum class Kind { zero, linear, regime_switch, regime_switch_ou, custom };

  /// b(t, x, out): writes b into out (size d).
  using Field = std::function<void(double, std::span<const double>, std::span<double>)>;
  /// Db(t, x, jac): writes the d x d spatial Jacobian, row-major.
  using Jacobian = std::function<void(double, std::span<const double>, std::span<double>)>;

  static DriftSpec zero();
  /// b(x) = lambda x.
  static DriftSpec linear(double lambda);
  /// b(x) = b1 if x > threshold, b2 otherwise.
  static DriftSpec regime_switch(double b1, double b2, double threshold);
  /// b(x) = (a1 1{x > threshold} + a2 1{x <= threshold}) (level - x).
  static DriftSpec regime_switch_ou(double a1, double a2, double threshold, double level);
  /// User field; jacobian may be empty if the flow is never needed.
  static DriftSpec custom(Field field, Jacobian jacobian, double bound, double l1_bound,
                          std::string name = "custom");

  Kind kind() const noexcept { return kind_; }
  /// sup |b|, infinite for unbounded kinds.
  double bound() const noexcept;
  /// sup_t int |b(t, x)| dx, reported metadata.
  double l1_bound() const noexcept;
  /// Stable text form, used in reproducibility digests.
  std::string describe() const;

  /// The raw (possibly discontinuous) field.
  void evaluate(double t, std::span<const double> x, std::span<double> out) const;
  /// -b; used to build the change of measure that removes the drift.
  DriftSpec negated() const;

  // Parameters of the built-in kinds.
  double lambda() const noexcept { return p0_; }
  double upper() const noexcept { return p0_; }  // b1 or a1
  double lower() const noexcept { return p1_; }  // b2 or a2
  double threshold() const noexcept { return p2_; }
  double level() const noexcept { return p3_; }
  double sign() const noexcept { return sign_; }

 private:
  friend class MollifiedDrift;
  DriftSpec() = default;

  Kind kind_ = Kind::zero;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  double sign_ = 1.0;
  Field field_;
  Jacobian jacobian_;
  double custom_bound_ = 0.0, custom_l1_ = 0.0;
  std::string name_;
};

/// Smooth approximation b_eps of a drift with an evaluable Jacobian. Indicator
/// switches 1{x > R} become the Gaussian cdf transition at width eps; smooth
/// kinds are returned unchanged.
class MollifiedDrift {
 public:
  MollifiedDrift(DriftSpec base, double epsilon);

  const DriftSpec& base() const noexcept { return base_; }
  double epsilon() const noexcept { return epsilon_; }

  void value(double t, std::span<const double> x, std::span<double> out) const;
  void jacobian(double t, std::span<const double> x, std::span<double> jac) const;
  /// Scalar forms for coordinate-wise kinds (value and derivative of one coordinate).
  double value_1d(double x) const;
  double derivative_1d(double x) const;
  bool coordinatewise() const noexcept { return base_.kind_ != DriftSpec::Kind::custom; }

 private:
  DriftSpec base_;
  double epsilon_;
};

MollifiedDrift mollify(const DriftSpec& base, double epsilon);

/// 4 sqrt(step) T^H: default transition width when the caller gives none.
double default_epsilon(const GridSpec& grid, HurstParam h);

/// Euler solution on the grid of the driving path.
struct StatePath {
  GridSpec grid{1.0, 2};
  std::size_t dim = 1;
  std::vector<double> x;  // (n + 1) x dim

  double at(std::size_t k, std::size_t i = 0) const { return x[k * dim + i]; }
  std::span<const double> state(std::size_t k) const { return {x.data() + k * dim, dim}; }
};

/// First variation J_k = dX_k / dx0 along one path.
struct FlowPath {
  GridSpec grid{1.0, 2};
  std::size_t dim = 1;
  std::vector<double> jac;  // (n + 1) x dim x dim, row-major blocks

  double at(std::size_t k, std::size_t r = 0, std::size_t c = 0) const {
    return jac[(k * dim + r) * dim + c];
  }
};

/// X[k+1] = X[k] + b_eps(t_k, X[k]) dt + (bh[k+1] - bh[k]).
StatePath euler_solve(const MollifiedDrift& drift, std::span<const double> x0, const JointPath& path);
/// Same recursion with the raw drift (no derivative needed).
StatePath euler_solve(const DriftSpec& drift, std::span<const double> x0, const JointPath& path);
void euler_solve_into(const MollifiedDrift& drift, std::span<const double> x0, const JointPath& path,
                      StatePath& out);

/// J[k+1] = J[k] + Db_eps(t_k, X[k]) J[k] dt, J[0] = I. In one dimension J
/// must stay positive; a non-positive factor is reported as an error.
FlowPath flow_derivative(const MollifiedDrift& drift, const StatePath& state);
void flow_derivative_into(const MollifiedDrift& drift, const StatePath& state, FlowPath& out);

}  // namespace fbel
