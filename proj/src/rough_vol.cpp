#include "fbel/rough_vol.hpp"

#include <cmath>
#include <sstream>

#include "fbel/error.hpp"
#include "fbel/parallel.hpp"

namespace fbel {

VolMap::VolMap(double alpha, double gamma) : alpha_(alpha), gamma_(gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("vol map alpha must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("vol map gamma must be non-negative");
}

namespace {
double logistic(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }
}  // namespace

double VolMap::value(double z) const noexcept { return alpha_ + gamma_ * logistic(z); }

double VolMap::slope(double z) const noexcept {
  const double p = logistic(z);
  return gamma_ * p * (1.0 - p);
}

double VolMap::curvature(double z) const noexcept {
  const double p = logistic(z);
  return gamma_ * p * (1.0 - p) * (1.0 - 2.0 * p);
}

void RVConfig::validate() const {
  if (!(x1 > 0.0) || !std::isfinite(x1)) throw InvalidArgument("initial stock price x1 must be positive");
  if (!std::isfinite(x2)) throw InvalidArgument("initial vol state x2 must be finite");
  if (!std::isfinite(mu)) throw InvalidArgument("mu must be finite");
  if (!vol_drift.coordinatewise()) throw InvalidArgument("vol drift must be one-dimensional");
}

std::string RVConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "mu=" << mu << ";g_alpha=" << g.alpha() << ";g_gamma=" << g.gamma() << ";vol_drift="
     << vol_drift.base().describe() << ";eps=" << vol_drift.epsilon() << ";x1=" << x1 << ";x2=" << x2
     << ";h=" << h.value();
  return os.str();
}

RVModel::RVModel(RVConfig cfg, GridSpec grid, VolterraScheme scheme)
    : cfg_(std::move(cfg)), grid_(grid), sampler_(grid, cfg_.h, scheme) {
  cfg_.validate();
}

RVPath RVModel::simulate(PathSeed fbm_seed, PathSeed stock_seed) const {
  const std::size_t n = grid_.n_steps();
  const double dt = grid_.step();
  const double sq = std::sqrt(dt);
  RVPath out;
  out.grid = grid_;
  out.fbm = sampler_.sample(1, fbm_seed);
  const double x2[1] = {cfg_.x2};
  StatePath vol = euler_solve(cfg_.vol_drift, x2, out.fbm);
  FlowPath flow = flow_derivative(cfg_.vol_drift, vol);
  out.sigma = std::move(vol.x);
  out.dsigma_dx2 = std::move(flow.jac);

  NormalStream normals(stock_seed, Stream::stock);
  out.dw_stock.resize(n);
  for (double& w : out.dw_stock) w = sq * normals.next();

  out.s.resize(n + 1);
  out.ds_dx1.resize(n + 1);
  out.ds_dx2.resize(n + 1);
  out.s[0] = cfg_.x1;
  out.ds_dx1[0] = 1.0;
  out.ds_dx2[0] = 0.0;
  double log_s = std::log(cfg_.x1);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = out.sigma[k];
    const double gv = cfg_.g.value(z);
    const double dw = out.dw_stock[k];
    log_s += (cfg_.mu - 0.5 * gv * gv) * dt + gv * dw;
    out.s[k + 1] = std::exp(log_s);
    out.ds_dx1[k + 1] = out.s[k + 1] / cfg_.x1;
    const double kk = out.ds_dx2[k];
    out.ds_dx2[k + 1] =
        kk + cfg_.mu * kk * dt + (cfg_.g.slope(z) * out.dsigma_dx2[k] * out.s[k] + gv * kk) * dw;
    if (!std::isfinite(out.s[k + 1]) || !(out.s[k + 1] > 0.0) || !std::isfinite(out.ds_dx2[k + 1])) {
      throw NumericalError("simulate_rv: stock recursion left the finite positive range", k + 1);
    }
  }
  return out;
}

std::pair<double, double> RVModel::terminal(double x1, double x2, PathSeed seed) const {
  if (!(x1 > 0.0)) throw InvalidArgument("initial stock price x1 must be positive");
  const std::size_t n = grid_.n_steps();
  const double dt = grid_.step();
  const double sq = std::sqrt(dt);
  const JointPath fbm = sampler_.sample(1, seed);
  const double start[1] = {x2};
  const StatePath vol = euler_solve(cfg_.vol_drift, start, fbm);
  NormalStream normals(seed, Stream::stock);
  double log_s = std::log(x1);
  for (std::size_t k = 0; k < n; ++k) {
    const double gv = cfg_.g.value(vol.x[k]);
    log_s += (cfg_.mu - 0.5 * gv * gv) * dt + gv * sq * normals.next();
  }
  return {std::exp(log_s), vol.x[n]};
}

RVPath simulate_rv(const RVConfig& cfg, const GridSpec& grid, PathSeed seed) {
  return RVModel(cfg, grid).simulate(seed);
}

RVWeights rv_weights(const RVPath& path, const RVConfig& cfg, const WeightFn& a, const BelWeightPlan& plan) {
  const std::size_t n = path.grid.n_steps();
  double w1 = 0.0, w2a = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double denom = path.s[k] * cfg.g.value(path.sigma[k]);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw NumericalError("sbel_delta: stock times volatility is not positive", k);
    }
    const double f = a(path.grid.time(k)) / denom * path.dw_stock[k];
    w1 += f * path.ds_dx1[k];
    w2a += f * path.ds_dx2[k];
  }
  FlowPath flow;
  flow.grid = path.grid;
  flow.dim = 1;
  flow.jac = path.dsigma_dx2;
  double w2b = 0.0;
  plan.weight(flow, path.fbm, std::span<double>(&w2b, 1));
  return {w1, w2a, w2b};
}

std::string RVProblem::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << cfg.describe() << ";T=" << grid.horizon() << ";n=" << grid.n_steps() << ";paths=" << n_paths
     << ";seed=" << master_seed << ";weight=" << a.describe()
     << ";scheme=" << (scheme == VolterraScheme::exact_residual ? "exact" : "cell");
  return os.str();
}

std::vector<DeltaEstimate> sbel_deltas(const RVProblem& problem, std::span<const RVPayoff> payoffs,
                                       std::span<const std::string> names) {
  if (problem.n_paths < 2) throw InvalidArgument("sbel_delta needs at least two paths");
  if (names.size() != payoffs.size()) throw InvalidArgument("sbel_delta: one name per payoff");
  const RVModel model(problem.cfg, problem.grid, problem.scheme);
  const BelWeightPlan plan(problem.cfg.h, problem.a, problem.grid);
  const std::size_t np = payoffs.size();
  const std::size_t n_paths = problem.n_paths;
  const std::size_t n = problem.grid.n_steps();

  // samples[(p * 2 + i) * n_paths + path]
  std::vector<double> samples(np * 2 * n_paths);
  parallel_for(n_paths, [&](std::size_t idx) {
    const RVPath path = model.simulate(PathSeed{problem.master_seed, idx});
    const RVWeights w = rv_weights(path, problem.cfg, problem.a, plan);
    for (std::size_t p = 0; p < np; ++p) {
      const double v = payoffs[p](path.s[n], path.sigma[n]);
      if (!std::isfinite(v)) throw NumericalError("payoff is not finite on path " + std::to_string(idx));
      samples[(p * 2 + 0) * n_paths + idx] = v * w.w1;
      samples[(p * 2 + 1) * n_paths + idx] = v * (w.w2a + w.w2b);
    }
  });

  const std::string base = problem.describe();
  std::vector<DeltaEstimate> out(np);
  for (std::size_t p = 0; p < np; ++p) {
    DeltaEstimate& e = out[p];
    e.n_paths = n_paths;
    e.config_digest = digest_token(base + ";payoff=" + names[p]);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto ms = mean_stderr(std::span<const double>(&samples[(p * 2 + i) * n_paths], n_paths));
      if (!std::isfinite(ms.mean) || !std::isfinite(ms.std_error)) {
        throw NumericalError("sbel_delta: non-finite sample variance");
      }
      e.mean.push_back(ms.mean);
      e.std_error.push_back(ms.std_error);
    }
  }
  return out;
}

DeltaEstimate sbel_delta(const RVConfig& cfg, const RVPayoff& payoff, const WeightFn& a, const GridSpec& grid,
                         std::size_t n_paths, std::uint64_t master_seed, const std::string& name) {
  const RVProblem problem{cfg, a, grid, n_paths, master_seed};
  return sbel_deltas(problem, std::span<const RVPayoff>(&payoff, 1), std::span<const std::string>(&name, 1))
      .front();
}

}  // namespace fbel
