#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fbel/frac_core.hpp"
#include "fbel/rng.hpp"

namespace fbel {

/// Uniform grid t_k = k T / n, k = 0..n.
class GridSpec {
 public:
  GridSpec(double horizon, std::size_t n_steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  double step() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
  double time(std::size_t k) const noexcept {
    return k == n_steps_ ? horizon_ : horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
  }
  std::vector<double> times() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double horizon_;
  std::size_t n_steps_;
};

/// One sample of the Wiener increments and the fBm they generate.
///
/// bh = conditional mean given the increments (sum of cell-averaged kernel
/// weights times dW) + residual, where the residual is the part of
/// int K_H(t_k, s) dW_s carried by the Brownian motion inside each cell. The
/// residual is independent of dW and is zero under VolterraScheme::cell_average.
struct JointPath {
  GridSpec grid{1.0, 2};
  std::size_t dim = 1;
  std::vector<double> dw;        // n_steps x dim, increment over [t_k, t_k+1]
  std::vector<double> bh;        // (n_steps + 1) x dim
  std::vector<double> residual;  // (n_steps + 1) x dim

  double dW(std::size_t k, std::size_t i = 0) const { return dw[k * dim + i]; }
  double BH(std::size_t k, std::size_t i = 0) const { return bh[k * dim + i]; }
  /// Component i of bh at every grid time.
  std::vector<double> bh_component(std::size_t i = 0) const;
};

enum class VolterraScheme {
  /// bh[k] = sum_j w(k, j) dW[j] only: exact cross-covariance with the
  /// increments but missing the within-cell variance.
  cell_average,
  /// Adds the exactly distributed independent residual, so (dW, bh) has the
  /// exact joint law of the continuous model observed on the grid.
  exact_residual,
};

/// Volterra-representation sampler for joint (Wiener, fBm) paths. Kernel
/// weights and the residual factor are computed once per (grid, h, scheme),
/// cached process-wide and shared read-only.
class VolterraSampler {
 public:
  VolterraSampler(GridSpec grid, HurstParam h,
                  VolterraScheme scheme = VolterraScheme::exact_residual);

  JointPath sample(std::size_t dim, PathSeed seed) const;
  /// Reuses the buffers of path.
  void sample_into(JointPath& path, std::size_t dim, PathSeed seed) const;
  /// Regenerates a path from given increments; residual normals come from
  /// residual_seed unless the scheme is cell_average.
  JointPath from_increments(std::span<const double> dw, std::size_t dim, PathSeed residual_seed) const;

  /// w(k, j) = (1/step) int_{t_j}^{t_j+1} K_H(t_k, s) ds for 0 <= j < k <= n.
  double weight(std::size_t k, std::size_t j) const;
  /// Diagonal jitter added to the residual covariance (0 if none was needed).
  double residual_jitter() const noexcept;

  /// max |bh - residual - sum_j w dW| recomputed independently of sampling.
  double consistency_error(const JointPath& path) const;

  const GridSpec& grid() const noexcept { return grid_; }
  HurstParam hurst() const noexcept { return h_; }
  VolterraScheme scheme() const noexcept { return scheme_; }

  struct Tables;

 private:
  GridSpec grid_;
  HurstParam h_;
  VolterraScheme scheme_;
  std::shared_ptr<const Tables> tables_;
};

JointPath sample_joint_path(const GridSpec& grid, HurstParam h, std::size_t dim, PathSeed seed,
                            VolterraScheme scheme = VolterraScheme::exact_residual);

/// Exact Gaussian sampler from the covariance matrix R_H over t_1..t_n.
/// Reference only: it produces no Wiener increments.
class CholeskySampler {
 public:
  static constexpr std::size_t kMaxSteps = 4096;

  CholeskySampler(GridSpec grid, HurstParam h);

  SampledFunction sample(PathSeed seed) const;
  /// Diagonal jitter applied after a failed first factorization, else 0.
  double jitter() const noexcept { return jitter_; }
  const GridSpec& grid() const noexcept { return grid_; }

 private:
  GridSpec grid_;
  HurstParam h_;
  std::vector<double> factor_;  // packed lower triangle
  double jitter_ = 0.0;
};

SampledFunction sample_cholesky(const GridSpec& grid, HurstParam h, PathSeed seed);

/// Entrywise comparison of sample covariance with R_H.
struct CovarianceReport {
  std::vector<std::size_t> indices;   // grid indices compared
  std::vector<double> sample_cov;     // m x m
  std::vector<double> target_cov;     // m x m
  std::vector<double> std_error;      // m x m
  std::vector<double> deviation_se;   // |sample - target| / se, m x m
  double max_deviation_se = 0.0;
  bool degenerate = false;            // some target variance > 0 has zero sample variance
  std::size_t n_paths = 0;
};

/// paths[p][k]: value of path p at grid time k. Uses all grid indices unless
/// a subset is given.
CovarianceReport covariance_report(std::span<const std::vector<double>> paths, const GridSpec& grid,
                                   HurstParam h,
                                   std::optional<std::vector<std::size_t>> indices = std::nullopt);

/// CSV dump with header path_index,k,t_k,dW_0..,bh_0..; dW is empty at k = n.
void write_paths_csv(std::ostream& out, std::span<const JointPath> paths,
                     std::uint64_t first_path_index = 0);

}  // namespace fbel
