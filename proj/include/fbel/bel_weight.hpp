#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbel/fbm_engine.hpp"
#include "fbel/payoff.hpp"
#include "fbel/sde_flow.hpp"

namespace fbel {

/// Time weight a on [0, T] with int_0^T a = 1.
class WeightFn {
 public:
  enum class Kind { uniform, custom };

  /// a = 1/T.
  static WeightFn uniform(double horizon);
  /// Piecewise-linear a through the samples; the grid must span [0, T]
  /// exactly and the trapezoid integral (exact for the interpolant) must be
  /// 1 within 1e-10.
  static WeightFn custom(SampledFunction a);
  /// "uniform", "ramp" (2s/T^2) or "reverse-ramp" (2(T-s)/T^2).
  static WeightFn parse(std::string_view name, double horizon);

  double operator()(double s) const;
  Kind kind() const noexcept { return kind_; }
  double horizon() const noexcept { return horizon_; }
  std::string describe() const;

 private:
  WeightFn(Kind kind, double horizon) : kind_(kind), horizon_(horizon) {}

  Kind kind_;
  double horizon_;
  SampledFunction samples_;
  std::string name_;
};

/// Deterministic part of the delta weight for one (h, a, grid). After
/// exchanging the order of integration the weight is
///   pi = C_H sum_{k=1}^{n-1} g(s_k) dW_k,
///   g(s_k) = s_k^(H-1/2) sum_{j<k} I_j a(s_k - u_j) (s_k - u_j)^(1/2-H) J(s_k - u_j)^T,
/// with I_j the exact integral of u^(-H-1/2) over cell j and u_j its
/// midpoint. J at s_k - u_j = (k-j-1/2) step is read at index k-j-1, the
/// latest grid time not after it.
class BelWeightPlan {
 public:
  BelWeightPlan(HurstParam h, const WeightFn& a, GridSpec grid);

  /// g(s_k) for k = 0..n as d x d row-major blocks; g(s_0) = 0.
  std::vector<double> profile(const FlowPath& flow) const;
  /// pi (size d), C_H included.
  void weight(const FlowPath& flow, const JointPath& path, std::span<double> pi) const;
  std::vector<double> weight(const FlowPath& flow, const JointPath& path) const;

  /// Coefficient of J[k-j-1]^T in g(s_k), 0 <= j < k <= n.
  double coefficient(std::size_t k, std::size_t j) const { return coef_[k * (k - 1) / 2 + j]; }
  /// int_{u_j}^{u_j+1} u^(-H-1/2) du.
  double outer_cell_integral(std::size_t j) const { return outer_[j]; }

  const GridSpec& grid() const noexcept { return grid_; }
  HurstParam hurst() const noexcept { return h_; }

 private:
  HurstParam h_;
  GridSpec grid_;
  double big_c_;
  std::vector<double> outer_;
  std::vector<double> coef_;  // row k holds j = 0..k-1
};

std::vector<double> weight_profile(HurstParam h, const WeightFn& a, const FlowPath& flow,
                                   const GridSpec& grid);
std::vector<double> malliavin_weight(HurstParam h, const WeightFn& a, const FlowPath& flow,
                                     const JointPath& path);

struct DeltaEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t n_paths = 0;
  /// 16 hex digits identifying every input that determines the result.
  std::string config_digest;
};

/// FNV-1a of a canonical description, as 16 hex digits.
std::string digest_token(std::string_view canonical);

struct DeltaProblem {
  MollifiedDrift drift;
  std::vector<double> x0;
  HurstParam h;
  WeightFn a;
  GridSpec grid;
  std::size_t n_paths;
  std::uint64_t master_seed;
  VolterraScheme scheme = VolterraScheme::exact_residual;

  std::string describe() const;
};

/// Monte-Carlo delta d/dx0 E[payoff(X_T)] = E[payoff(X_T) pi], one estimate
/// per payoff, all payoffs sharing the same paths.
std::vector<DeltaEstimate> estimate_deltas(const DeltaProblem& problem, std::span<const Payoff> payoffs);
DeltaEstimate estimate_delta(const DeltaProblem& problem, const Payoff& payoff);

DeltaEstimate estimate_delta(const MollifiedDrift& drift, std::span<const double> x0, const Payoff& payoff,
                             HurstParam h, const WeightFn& a, const GridSpec& grid, std::size_t n_paths,
                             std::uint64_t master_seed);

}  // namespace fbel
