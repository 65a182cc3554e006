#include "fbel/bel_weight.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fbel/error.hpp"
#include "fbel/parallel.hpp"

namespace fbel {

WeightFn WeightFn::uniform(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("weight horizon must be positive");
  return WeightFn(Kind::uniform, horizon);
}

WeightFn WeightFn::custom(SampledFunction a) {
  if (a.size() < 2) throw InvalidArgument("custom weight needs at least two samples");
  if (a.grid.front() != 0.0) throw InvalidArgument("custom weight grid must start at 0");
  double integral = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.values[i])) throw InvalidArgument("custom weight must be finite");
    if (i > 0) integral += 0.5 * (a.values[i] + a.values[i - 1]) * (a.grid[i] - a.grid[i - 1]);
  }
  if (std::abs(integral - 1.0) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "custom weight integrates to " << integral << ", expected 1";
    throw InvalidArgument(os.str());
  }
  WeightFn w(Kind::custom, a.grid.back());
  w.samples_ = std::move(a);
  return w;
}

WeightFn WeightFn::parse(std::string_view name, double horizon) {
  if (name == "uniform") return uniform(horizon);
  if (!(horizon > 0.0)) throw InvalidArgument("weight horizon must be positive");
  const double top = 2.0 / horizon;
  WeightFn w = [&] {
    if (name == "ramp") return custom(SampledFunction({0.0, horizon}, {0.0, top}));
    if (name == "reverse-ramp") return custom(SampledFunction({0.0, horizon}, {top, 0.0}));
    throw InvalidArgument("unknown weight function '" + std::string(name) + "' (uniform, ramp, reverse-ramp)");
  }();
  w.name_ = std::string(name);
  return w;
}

double WeightFn::operator()(double s) const {
  if (kind_ == Kind::uniform) return 1.0 / horizon_;
  return samples_.interpolate(s);
}

std::string WeightFn::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::uniform) {
    os << "uniform:" << horizon_;
  } else if (!name_.empty()) {
    os << name_ << ":" << horizon_;
  } else {
    os << "custom:" << digest_token([&] {
      std::ostringstream s;
      s.precision(17);
      for (std::size_t i = 0; i < samples_.size(); ++i) s << samples_.grid[i] << ',' << samples_.values[i] << ';';
      return s.str();
    }());
  }
  return os.str();
}

BelWeightPlan::BelWeightPlan(HurstParam h, const WeightFn& a, GridSpec grid)
    : h_(h), grid_(grid), big_c_(big_c_h(h)) {
  if (std::abs(a.horizon() - grid.horizon()) > 1e-12 * grid.horizon()) {
    throw InvalidArgument("weight function horizon differs from the grid horizon");
  }
  const std::size_t n = grid.n_steps();
  const double hv = h.value();
  const double p = 0.5 - hv;
  const double dt = grid.step();
  outer_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    outer_[j] = (std::pow(grid.time(j + 1), p) - std::pow(grid.time(j), p)) / p;
  }
  coef_.resize(n * (n + 1) / 2);
  for (std::size_t k = 1; k <= n; ++k) {
    const double sk = grid.time(k);
    const double lead = std::pow(sk, hv - 0.5);
    double* row = &coef_[k * (k - 1) / 2];
    for (std::size_t j = 0; j < k; ++j) {
      const double lag = (static_cast<double>(k - j) - 0.5) * dt;
      row[j] = lead * outer_[j] * a(lag) * std::pow(lag, p);
    }
  }
}

std::vector<double> BelWeightPlan::profile(const FlowPath& flow) const {
  if (!(flow.grid == grid_)) throw InvalidArgument("flow grid differs from the weight grid");
  const std::size_t n = grid_.n_steps();
  const std::size_t d = flow.dim;
  const std::size_t dd = d * d;
  std::vector<double> g((n + 1) * dd, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double* row = &coef_[k * (k - 1) / 2];
    double* gk = &g[k * dd];
    for (std::size_t j = 0; j < k; ++j) {
      const double* jac = &flow.jac[(k - j - 1) * dd];
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) gk[r * d + c] += row[j] * jac[c * d + r];
      }
    }
  }
  return g;
}

void BelWeightPlan::weight(const FlowPath& flow, const JointPath& path, std::span<double> pi) const {
  if (!(flow.grid == grid_) || !(path.grid == grid_)) {
    throw InvalidArgument("flow and path must share the weight grid");
  }
  const std::size_t d = flow.dim;
  if (path.dim != d || pi.size() != d) throw InvalidArgument("weight dimension mismatch");
  const std::size_t n = grid_.n_steps();
  const std::size_t dd = d * d;
  std::fill(pi.begin(), pi.end(), 0.0);

  if (d == 1) {
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      const double* row = &coef_[k * (k - 1) / 2];
      double gk = 0.0;
      for (std::size_t j = 0; j < k; ++j) gk += row[j] * flow.jac[k - j - 1];
      acc += gk * path.dw[k];
      if (!std::isfinite(acc)) throw NumericalError("malliavin_weight: non-finite weight", k);
    }
    pi[0] = big_c_ * acc;
    return;
  }

  std::vector<double> gk(dd);
  for (std::size_t k = 1; k < n; ++k) {
    std::fill(gk.begin(), gk.end(), 0.0);
    const double* row = &coef_[k * (k - 1) / 2];
    for (std::size_t j = 0; j < k; ++j) {
      const double* jac = &flow.jac[(k - j - 1) * dd];
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) gk[r * d + c] += row[j] * jac[c * d + r];
      }
    }
    for (std::size_t r = 0; r < d; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += gk[r * d + c] * path.dw[k * d + c];
      pi[r] += s;
      if (!std::isfinite(pi[r])) throw NumericalError("malliavin_weight: non-finite weight", k);
    }
  }
  for (double& v : pi) v *= big_c_;
}

std::vector<double> BelWeightPlan::weight(const FlowPath& flow, const JointPath& path) const {
  std::vector<double> pi(flow.dim);
  weight(flow, path, pi);
  return pi;
}

std::vector<double> weight_profile(HurstParam h, const WeightFn& a, const FlowPath& flow, const GridSpec& grid) {
  return BelWeightPlan(h, a, grid).profile(flow);
}

std::vector<double> malliavin_weight(HurstParam h, const WeightFn& a, const FlowPath& flow, const JointPath& path) {
  return BelWeightPlan(h, a, path.grid).weight(flow, path);
}

std::string digest_token(std::string_view canonical) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string DeltaProblem::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "h=" << h.value() << ";T=" << grid.horizon() << ";n=" << grid.n_steps() << ";paths=" << n_paths
     << ";seed=" << master_seed << ";drift=" << drift.base().describe() << ";eps=" << drift.epsilon()
     << ";weight=" << a.describe() << ";scheme=" << (scheme == VolterraScheme::exact_residual ? "exact" : "cell")
     << ";x0=";
  for (double v : x0) os << v << ',';
  return os.str();
}

std::vector<DeltaEstimate> estimate_deltas(const DeltaProblem& problem, std::span<const Payoff> payoffs) {
  if (problem.n_paths < 2) throw InvalidArgument("estimate_delta needs at least two paths");
  const std::size_t d = problem.x0.size();
  if (d == 0) throw InvalidArgument("initial state is empty");
  const std::size_t np = payoffs.size();
  const std::size_t n_paths = problem.n_paths;

  const VolterraSampler sampler(problem.grid, problem.h, problem.scheme);
  const BelWeightPlan plan(problem.h, problem.a, problem.grid);
  const std::size_t n = problem.grid.n_steps();

  // samples[(p * d + i) * n_paths + path]
  std::vector<double> samples(np * d * n_paths);
  parallel_for(n_paths, [&](std::size_t path_index) {
    const JointPath path = sampler.sample(d, PathSeed{problem.master_seed, path_index});
    const StatePath state = euler_solve(problem.drift, problem.x0, path);
    const FlowPath flow = flow_derivative(problem.drift, state);
    std::vector<double> pi(d);
    plan.weight(flow, path, pi);
    const auto terminal = state.state(n);
    for (std::size_t p = 0; p < np; ++p) {
      const double v = payoffs[p](terminal);
      if (!std::isfinite(v)) {
        throw NumericalError("payoff is not finite on path " + std::to_string(path_index));
      }
      for (std::size_t i = 0; i < d; ++i) samples[(p * d + i) * n_paths + path_index] = v * pi[i];
    }
  });

  const std::string base = problem.describe();
  std::vector<DeltaEstimate> out(np);
  for (std::size_t p = 0; p < np; ++p) {
    DeltaEstimate& e = out[p];
    e.n_paths = n_paths;
    e.config_digest = digest_token(base + ";payoff=" + payoffs[p].describe());
    for (std::size_t i = 0; i < d; ++i) {
      const auto ms = mean_stderr(std::span<const double>(&samples[(p * d + i) * n_paths], n_paths));
      if (!std::isfinite(ms.mean) || !std::isfinite(ms.std_error)) {
        throw NumericalError("delta estimate has non-finite sample variance");
      }
      e.mean.push_back(ms.mean);
      e.std_error.push_back(ms.std_error);
    }
  }
  return out;
}

DeltaEstimate estimate_delta(const DeltaProblem& problem, const Payoff& payoff) {
  return estimate_deltas(problem, std::span<const Payoff>(&payoff, 1)).front();
}

DeltaEstimate estimate_delta(const MollifiedDrift& drift, std::span<const double> x0, const Payoff& payoff,
                             HurstParam h, const WeightFn& a, const GridSpec& grid, std::size_t n_paths,
                             std::uint64_t master_seed) {
  const DeltaProblem problem{drift, std::vector<double>(x0.begin(), x0.end()), h, a, grid, n_paths, master_seed};
  return estimate_delta(problem, payoff);
}

}  // namespace fbel
