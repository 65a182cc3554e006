#include "fbel/girsanov.hpp"

#include <cmath>

#include "fbel/error.hpp"

namespace fbel {

GirsanovPlan::GirsanovPlan(HurstParam h, GridSpec grid)
    : h_(h), grid_(grid), inverse_(h, grid.step(), grid.n_steps()),
      scale_(kh_inverse_normalization(h)) {}

std::vector<double> GirsanovPlan::density_integrand(const DriftSpec& drift, const JointPath& path,
                                                    double x0) const {
  if (path.dim != 1) throw InvalidArgument("girsanov_xi is one-dimensional");
  if (!(path.grid == grid_)) throw InvalidArgument("girsanov_xi: path grid differs from the plan grid");
  if (!std::isfinite(drift.bound())) throw InvalidArgument("girsanov_xi needs a bounded drift");
  const std::size_t n = grid_.n_steps();
  std::vector<double> u(n + 1), q(n + 1);
  double x = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    x = x0 + path.bh[k];
    drift.evaluate(grid_.time(k), std::span<const double>(&x, 1), std::span<double>(&u[k], 1));
  }
  inverse_.apply(u, q);
  for (std::size_t k = 0; k <= n; ++k) {
    q[k] *= scale_;
    if (!std::isfinite(q[k])) throw NumericalError("girsanov_xi: non-finite density integrand", k);
  }
  return q;
}

GirsanovWeight GirsanovPlan::weight(const DriftSpec& drift, const JointPath& path, double x0) const {
  const auto q = density_integrand(drift, path, x0);
  const std::size_t n = grid_.n_steps();
  const double dt = grid_.step();
  double ito = 0.0, quad = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ito += q[k] * path.dw[k];
    quad += q[k] * q[k];
  }
  const double log_xi = -ito - 0.5 * quad * dt;
  if (!std::isfinite(log_xi)) throw NumericalError("girsanov_xi: non-finite log density");
  return {std::exp(log_xi), log_xi};
}

GirsanovWeight girsanov_xi(HurstParam h, const DriftSpec& drift, const JointPath& path, double x0) {
  return GirsanovPlan(h, path.grid).weight(drift, path, x0);
}

GirsanovCheck girsanov_check(HurstParam h, const DriftSpec& drift, double x0,
                             const std::function<double(double)>& f, const GridSpec& grid,
                             std::size_t n_paths, std::uint64_t master_seed, VolterraScheme scheme) {
  if (n_paths < 2) throw InvalidArgument("girsanov_check needs at least two paths");
  const VolterraSampler sampler(grid, h, scheme);
  const GirsanovPlan plan(h, grid);
  const DriftSpec towards = drift.negated();
  const std::size_t n = grid.n_steps();
  // Direct Euler paths use a disjoint block of path indices.
  constexpr std::uint64_t kDirectOffset = std::uint64_t{1} << 61;
  std::vector<double> xi(n_paths), weighted(n_paths), direct(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    const JointPath path = sampler.sample(1, PathSeed{master_seed, p});
    const auto w = plan.weight(towards, path, x0);
    xi[p] = w.xi;
    weighted[p] = w.xi * f(x0 + path.bh[n]);
    const JointPath other = sampler.sample(1, PathSeed{master_seed, p + kDirectOffset});
    const double start[1] = {x0};
    direct[p] = f(euler_solve(drift, start, other).at(n));
  });
  return {mean_stderr(xi), mean_stderr(weighted), mean_stderr(direct), n_paths};
}

}  // namespace fbel
