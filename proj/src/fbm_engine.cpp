#include "fbel/fbm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "fbel/error.hpp"
#include "linalg.hpp"

namespace fbel {

GridSpec::GridSpec(double horizon, std::size_t n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("grid horizon must be positive");
  if (n_steps < 2) throw InvalidArgument("grid needs at least 2 steps");
}

std::vector<double> GridSpec::times() const {
  std::vector<double> t(n_steps_ + 1);
  for (std::size_t k = 0; k <= n_steps_; ++k) t[k] = time(k);
  return t;
}

std::vector<double> JointPath::bh_component(std::size_t i) const {
  std::vector<double> out(grid.n_steps() + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = BH(k, i);
  return out;
}

struct VolterraSampler::Tables {
  std::vector<double> weights;  // row k = 1..n at offset (k-1)k/2
  std::vector<double> factor;   // packed lower Cholesky factor of the residual covariance
  double jitter = 0.0;

  double w(std::size_t k, std::size_t j) const { return weights[(k - 1) * k / 2 + j]; }
};

namespace {

using TableKey = std::tuple<std::size_t, double, double, int>;

std::shared_ptr<const VolterraSampler::Tables> build_tables(const GridSpec& grid, HurstParam h,
                                                           VolterraScheme scheme) {
  auto tables = std::make_shared<VolterraSampler::Tables>();
  const std::size_t n = grid.n_steps();
  const double H = h.value();
  const double dt = grid.step();
  const double ch = c_h(h);

  // Exact cell averages from the antiderivative of the kernel profile.
  tables->weights.resize(n * (n + 1) / 2);
  std::vector<double> prim(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    for (std::size_t j = 0; j <= k; ++j) {
      prim[j] = kernel_profile_integral(h, static_cast<double>(j) / kd);
    }
    const double scale = ch * std::pow(kd, H + 0.5) * std::pow(dt, H - 0.5);
    double* row = &tables->weights[(k - 1) * k / 2];
    for (std::size_t j = 0; j < k; ++j) row[j] = scale * (prim[j + 1] - prim[j]);
  }

  if (scheme == VolterraScheme::exact_residual) {
    // Residual covariance: R_H(t_k, t_m) minus the covariance already carried
    // by the cell averages.
    std::vector<double> cov(n * (n + 1) / 2);
    double max_diag = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t k = a + 1;
      const double* wk = &tables->weights[(k - 1) * k / 2];
      for (std::size_t b = 0; b <= a; ++b) {
        const std::size_t m = b + 1;
        const double* wm = &tables->weights[(m - 1) * m / 2];
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += wk[j] * wm[j];
        cov[detail::packed_index(a, b)] = cov_rh(h, grid.time(k), grid.time(m)) - dt * s;
      }
      max_diag = std::max(max_diag, cov[detail::packed_index(a, a)]);
    }
    std::vector<double> jitters = {0.0, 1e-14 * max_diag, 1e-12 * max_diag, 1e-10 * max_diag};
    tables->jitter = detail::cholesky_with_jitter(cov, n, tables->factor, jitters, "volterra residual");
  }
  return tables;
}

std::shared_ptr<const VolterraSampler::Tables> cached_tables(const GridSpec& grid, HurstParam h,
                                                            VolterraScheme scheme) {
  static std::mutex mutex;
  static std::map<TableKey, std::shared_ptr<const VolterraSampler::Tables>> cache;
  const TableKey key{grid.n_steps(), h.value(), grid.horizon(), static_cast<int>(scheme)};
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() >= 16) cache.clear();
  auto tables = build_tables(grid, h, scheme);
  cache.emplace(key, tables);
  return tables;
}

}  // namespace

VolterraSampler::VolterraSampler(GridSpec grid, HurstParam h, VolterraScheme scheme)
    : grid_(grid), h_(h), scheme_(scheme), tables_(cached_tables(grid, h, scheme)) {}

double VolterraSampler::weight(std::size_t k, std::size_t j) const {
  if (k == 0 || k > grid_.n_steps() || j >= k) throw InvalidArgument("weight index out of range");
  return tables_->w(k, j);
}

double VolterraSampler::residual_jitter() const noexcept { return tables_->jitter; }

namespace {

void fill_bh(const VolterraSampler::Tables& tables, VolterraScheme scheme, JointPath& path,
             PathSeed residual_seed) {
  const std::size_t n = path.grid.n_steps();
  const std::size_t d = path.dim;
  path.bh.assign((n + 1) * d, 0.0);
  path.residual.assign((n + 1) * d, 0.0);
  if (scheme == VolterraScheme::exact_residual) {
    NormalStream normals(residual_seed, Stream::residual);
    std::vector<double> z(n * d);
    for (double& v : z) v = normals.next();
    for (std::size_t a = 0; a < n; ++a) {
      const double* row = &tables.factor[detail::packed_index(a, 0)];
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t b = 0; b <= a; ++b) s += row[b] * z[b * d + i];
        path.residual[(a + 1) * d + i] = s;
      }
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const double* wk = &tables.weights[(k - 1) * k / 2];
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += wk[j] * path.dw[j * d + i];
      path.bh[k * d + i] = s + path.residual[k * d + i];
    }
  }
}

}  // namespace

void VolterraSampler::sample_into(JointPath& path, std::size_t dim, PathSeed seed) const {
  if (dim == 0) throw InvalidArgument("dimension must be at least 1");
  const std::size_t n = grid_.n_steps();
  path.grid = grid_;
  path.dim = dim;
  path.dw.resize(n * dim);
  NormalStream normals(seed, Stream::wiener);
  const double sd = std::sqrt(grid_.step());
  for (double& v : path.dw) v = sd * normals.next();
  fill_bh(*tables_, scheme_, path, seed);
}

JointPath VolterraSampler::sample(std::size_t dim, PathSeed seed) const {
  JointPath path;
  sample_into(path, dim, seed);
  return path;
}

JointPath VolterraSampler::from_increments(std::span<const double> dw, std::size_t dim,
                                           PathSeed residual_seed) const {
  if (dim == 0 || dw.size() != grid_.n_steps() * dim) throw InvalidArgument("increment count mismatch");
  JointPath path;
  path.grid = grid_;
  path.dim = dim;
  path.dw.assign(dw.begin(), dw.end());
  fill_bh(*tables_, scheme_, path, residual_seed);
  return path;
}

double VolterraSampler::consistency_error(const JointPath& path) const {
  if (!(path.grid == grid_)) throw InvalidArgument("path grid differs from sampler grid");
  const std::size_t d = path.dim;
  double worst = std::abs(path.BH(0, 0));
  for (std::size_t k = 1; k <= grid_.n_steps(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = k; j-- > 0;) s += weight(k, j) * path.dW(j, i);
      worst = std::max(worst, std::abs(path.BH(k, i) - path.residual[k * d + i] - s));
    }
  }
  return worst;
}

JointPath sample_joint_path(const GridSpec& grid, HurstParam h, std::size_t dim, PathSeed seed,
                            VolterraScheme scheme) {
  return VolterraSampler(grid, h, scheme).sample(dim, seed);
}

CholeskySampler::CholeskySampler(GridSpec grid, HurstParam h) : grid_(grid), h_(h) {
  const std::size_t n = grid.n_steps();
  if (n > kMaxSteps) throw InvalidArgument("cholesky sampler limited to 4096 steps");
  std::vector<double> cov(n * (n + 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      cov[detail::packed_index(a, b)] = cov_rh(h, grid.time(a + 1), grid.time(b + 1));
    }
  }
  jitter_ = detail::cholesky_with_jitter(cov, n, factor_, {0.0, 1e-12}, "fBm covariance");
}

SampledFunction CholeskySampler::sample(PathSeed seed) const {
  const std::size_t n = grid_.n_steps();
  NormalStream normals(seed, Stream::cholesky);
  std::vector<double> z(n);
  for (double& v : z) v = normals.next();
  std::vector<double> values(n + 1, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const double* row = &factor_[detail::packed_index(a, 0)];
    double s = 0.0;
    for (std::size_t b = 0; b <= a; ++b) s += row[b] * z[b];
    values[a + 1] = s;
  }
  return SampledFunction(grid_.times(), std::move(values));
}

SampledFunction sample_cholesky(const GridSpec& grid, HurstParam h, PathSeed seed) {
  return CholeskySampler(grid, h).sample(seed);
}

CovarianceReport covariance_report(std::span<const std::vector<double>> paths, const GridSpec& grid,
                                   HurstParam h, std::optional<std::vector<std::size_t>> indices) {
  if (paths.size() < 2) throw InvalidArgument("covariance_report needs at least 2 paths");
  const std::size_t npts = grid.n_steps() + 1;
  for (const auto& p : paths) {
    if (p.size() != npts) throw InvalidArgument("path length does not match grid");
  }
  CovarianceReport rep;
  if (indices) {
    rep.indices = std::move(*indices);
  } else {
    rep.indices.resize(npts);
    for (std::size_t k = 0; k < npts; ++k) rep.indices[k] = k;
  }
  for (std::size_t k : rep.indices) {
    if (k >= npts) throw InvalidArgument("covariance index out of range");
  }
  const std::size_t m = rep.indices.size();
  const std::size_t count = paths.size();
  const double cnt = static_cast<double>(count);
  rep.n_paths = count;
  rep.sample_cov.assign(m * m, 0.0);
  rep.target_cov.assign(m * m, 0.0);
  rep.std_error.assign(m * m, 0.0);
  rep.deviation_se.assign(m * m, 0.0);

  std::vector<double> means(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double s = 0.0;
    for (const auto& p : paths) s += p[rep.indices[a]];
    means[a] = s / cnt;
  }
  std::vector<double> centered(count * m);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t a = 0; a < m; ++a) centered[p * m + a] = paths[p][rep.indices[a]] - means[a];
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double s = 0.0, s2 = 0.0;
      for (std::size_t p = 0; p < count; ++p) {
        const double prod = centered[p * m + a] * centered[p * m + b];
        s += prod;
        s2 += prod * prod;
      }
      const double mean_prod = s / cnt;
      const double var_prod = std::max(0.0, (s2 - cnt * mean_prod * mean_prod) / (cnt - 1.0));
      const double cov = s / (cnt - 1.0);
      const double target = cov_rh(h, grid.time(rep.indices[a]), grid.time(rep.indices[b]));
      const double se = std::sqrt(var_prod / cnt);
      const double diff = std::abs(cov - target);
      double dev = 0.0;
      if (se > 0.0) {
        dev = diff / se;
      } else if (diff > 1e-14 * std::max(1.0, std::abs(target))) {
        dev = std::numeric_limits<double>::infinity();
      }
      for (auto [r, c] : {std::pair{a, b}, std::pair{b, a}}) {
        rep.sample_cov[r * m + c] = cov;
        rep.target_cov[r * m + c] = target;
        rep.std_error[r * m + c] = se;
        rep.deviation_se[r * m + c] = dev;
      }
      rep.max_deviation_se = std::max(rep.max_deviation_se, dev);
      // identical paths leave only rounding in the centered values
      if (a == b && target > 0.0 && cov <= 1e-12 * target) rep.degenerate = true;
    }
  }
  return rep;
}

void write_paths_csv(std::ostream& out, std::span<const JointPath> paths, std::uint64_t first_path_index) {
  if (paths.empty()) return;
  const std::size_t d = paths.front().dim;
  out << "path_index,k,t_k";
  for (std::size_t i = 0; i < d; ++i) out << ",dW_" << i;
  for (std::size_t i = 0; i < d; ++i) out << ",bh_" << i;
  out << '\n';
  const auto old_prec = out.precision(17);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const JointPath& path = paths[p];
    const std::size_t n = path.grid.n_steps();
    for (std::size_t k = 0; k <= n; ++k) {
      out << first_path_index + p << ',' << k << ',' << path.grid.time(k);
      for (std::size_t i = 0; i < d; ++i) {
        out << ',';
        if (k < n) out << path.dW(k, i);
      }
      for (std::size_t i = 0; i < d; ++i) out << ',' << path.BH(k, i);
      out << '\n';
    }
  }
  out.precision(old_prec);
  if (!out) throw IoError("failed writing path CSV");
}

}  // namespace fbel
