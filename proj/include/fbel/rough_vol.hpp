#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbel/bel_weight.hpp"
#include "fbel/fbm_engine.hpp"
#include "fbel/sde_flow.hpp"

namespace fbel {

/// g(z) = alpha + gamma / (1 + e^-z): bounded, smooth, and above alpha.
class VolMap {
 public:
  VolMap(double alpha, double gamma);

  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double value(double z) const noexcept;
  double slope(double z) const noexcept;
  double curvature(double z) const noexcept;

 private:
  double alpha_;
  double gamma_;
};

/// dS = mu S dt + g(sigma) S dW',  d sigma = b(sigma) dt + dB^H, with W'
/// independent of B^H. S_0 = x1, sigma_0 = x2.
struct RVConfig {
  double mu;
  VolMap g;
  MollifiedDrift vol_drift;
  double x1;
  double x2;
  HurstParam h;

  void validate() const;
  std::string describe() const;
};

struct RVPath {
  GridSpec grid{1.0, 2};
  std::vector<double> s;
  std::vector<double> sigma;
  std::vector<double> ds_dx1;
  std::vector<double> ds_dx2;
  std::vector<double> dsigma_dx2;
  std::vector<double> dw_stock;  // W' increments, n_steps
  JointPath fbm;                 // drives sigma
};

/// Path simulator for one (config, grid). The fBm comes from the wiener and
/// residual streams of its seed, W' from the stock stream, so the two noises
/// are independent and can be reseeded separately.
class RVModel {
 public:
  RVModel(RVConfig cfg, GridSpec grid, VolterraScheme scheme = VolterraScheme::exact_residual);

  RVPath simulate(PathSeed seed) const { return simulate(seed, seed); }
  RVPath simulate(PathSeed fbm_seed, PathSeed stock_seed) const;
  /// (S_T, sigma_T) from another initial point, derivatives skipped.
  std::pair<double, double> terminal(double x1, double x2, PathSeed seed) const;

  const RVConfig& config() const noexcept { return cfg_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const VolterraSampler& sampler() const noexcept { return sampler_; }

 private:
  RVConfig cfg_;
  GridSpec grid_;
  VolterraSampler sampler_;
};

RVPath simulate_rv(const RVConfig& cfg, const GridSpec& grid, PathSeed seed);

using RVPayoff = std::function<double(double s, double sigma)>;

/// The three path weights of the two-factor delta; delta = (E[phi w1],
/// E[phi (w2a + w2b)]).
struct RVWeights {
  double w1;
  double w2a;
  double w2b;
};
RVWeights rv_weights(const RVPath& path, const RVConfig& cfg, const WeightFn& a, const BelWeightPlan& plan);

struct RVProblem {
  RVConfig cfg;
  WeightFn a;
  GridSpec grid;
  std::size_t n_paths;
  std::uint64_t master_seed;
  VolterraScheme scheme = VolterraScheme::exact_residual;

  std::string describe() const;
};

/// Delta in (x1, x2), one estimate per payoff on shared paths. names feed
/// the reproducibility digest.
std::vector<DeltaEstimate> sbel_deltas(const RVProblem& problem, std::span<const RVPayoff> payoffs,
                                       std::span<const std::string> names);
DeltaEstimate sbel_delta(const RVConfig& cfg, const RVPayoff& payoff, const WeightFn& a, const GridSpec& grid,
                         std::size_t n_paths, std::uint64_t master_seed, const std::string& name = "payoff");

}  // namespace fbel
