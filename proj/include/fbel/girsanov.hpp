#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fbel/fbm_engine.hpp"
#include "fbel/parallel.hpp"
#include "fbel/sde_flow.hpp"

namespace fbel {

struct GirsanovWeight {
  double xi;
  double log_xi;
};

/// Change of measure for a bounded one-dimensional drift along zero-drift
/// paths x0 + B^H. With u_r = b(r, x0 + B^H_r) and
///   q = K_H^{-1}(int u) = s^(H-1/2) I^{1/2-H}[s^(1/2-H) u] / (c_H Gamma(H+1/2)),
///   log xi = -sum_k q(s_k) dW_k - 1/2 sum_k q(s_k)^2 step,
/// the process x0 + B^H solves dX = -b dt + dB^H under xi dP. Pass
/// drift.negated() to reweight towards drift b.
class GirsanovPlan {
 public:
  GirsanovPlan(HurstParam h, GridSpec grid);

  GirsanovWeight weight(const DriftSpec& drift, const JointPath& path, double x0) const;
  /// q at every grid time (q(0) = 0).
  std::vector<double> density_integrand(const DriftSpec& drift, const JointPath& path, double x0) const;

 private:
  HurstParam h_;
  GridSpec grid_;
  UniformKhInverse inverse_;
  double scale_;
};

GirsanovWeight girsanov_xi(HurstParam h, const DriftSpec& drift, const JointPath& path, double x0);

/// Two estimates of E[f(X_T)] for dX = b dt + dB^H, X_0 = x0: xi-reweighted
/// zero-drift paths and Euler paths driven by independent noise.
struct GirsanovCheck {
  MeanStderr xi;          // E[xi] for the reweighting density
  MeanStderr reweighted;  // E[xi f(x0 + B^H_T)]
  MeanStderr direct;      // E[f(X_T)] from euler_solve with the raw drift
  std::size_t n_paths = 0;
};

GirsanovCheck girsanov_check(HurstParam h, const DriftSpec& drift, double x0,
                             const std::function<double(double)>& f, const GridSpec& grid,
                             std::size_t n_paths, std::uint64_t master_seed,
                             VolterraScheme scheme = VolterraScheme::exact_residual);

}  // namespace fbel
