#include "fbel/validation.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <sstream>
#include <utility>

#include "fbel/bel_weight.hpp"
#include "fbel/error.hpp"
#include "fbel/fbm_engine.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/girsanov.hpp"
#include "fbel/parallel.hpp"
#include "fbel/special.hpp"

namespace fbel {

namespace {

// K_H(t, u) with the gap t - u supplied separately, so the diagonal
// singularity keeps full relative precision when u is within rounding of t.
double kernel_with_gap(HurstParam h, double t, double u, double gap) {
  const double H = h.value();
  const double x = std::min(u / t, 1.0);
  const double tail = special::incomplete_beta_upper(x, 1.0 - 2.0 * H, H + 0.5);
  return c_h(h) * std::pow(t, H - 0.5) *
         (std::pow(x, 0.5 - H) * std::pow(gap / t, H - 0.5) + (0.5 - H) * std::pow(x, H - 0.5) * tail);
}

}  // namespace

double kernel_covariance_quadrature(HurstParam h, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0)) throw DomainError("kernel_covariance_quadrature needs positive times");
  const double lo = std::min(t, s);
  boost::math::quadrature::tanh_sinh<double> integrator;
  // xc is the signed distance to the nearer endpoint, exact near lo
  auto f = [&](double u, double xc) {
    const double gap = xc > 0.0 ? xc : lo - u;
    if (!(u > 0.0) || !(gap > 0.0)) return 0.0;
    u = std::min(u, lo);
    const double kt = t == lo ? kernel_with_gap(h, t, u, gap) : kernel_kh(h, t, u);
    const double ks = s == lo ? kernel_with_gap(h, s, u, gap) : kernel_kh(h, s, u);
    return kt * ks;
  };
  return integrator.integrate(f, 0.0, lo);
}

namespace {

std::string label(const char* name, double v) {
  std::ostringstream os;
  os << name << '=' << v;
  return os.str();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void covariance_checks(const ValidationOptions& o, std::vector<ResultRow>& rows) {
  const GridSpec coarse(o.horizon, 64);
  const CholeskySampler chol(coarse, o.h);
  std::vector<std::vector<double>> paths(o.n_paths);
  parallel_for(o.n_paths, [&](std::size_t p) { paths[p] = chol.sample(PathSeed{o.seed, p}).values; });
  std::vector<std::size_t> interior;
  for (std::size_t k = 1; k <= coarse.n_steps(); ++k) interior.push_back(k);
  auto rep = covariance_report(paths, coarse, o.h, interior);
  rows.push_back(compare_row("cov_cholesky_max_dev_se", "n=64", rep.max_deviation_se, std::nullopt, o.n_paths,
                             0.0, 5.0));

  const GridSpec grid(o.horizon, o.steps);
  const VolterraSampler vs(grid, o.h);
  parallel_for(o.n_paths, [&](std::size_t p) { paths[p] = vs.sample(1, PathSeed{o.seed, p}).bh; });
  std::vector<std::size_t> subset;
  for (std::size_t m = 1; m <= 8; ++m) subset.push_back(std::max<std::size_t>(1, m * o.steps / 8));
  rep = covariance_report(paths, grid, o.h, subset);
  rows.push_back(compare_row("cov_volterra_max_dev_se", "n=" + std::to_string(o.steps), rep.max_deviation_se,
                             std::nullopt, o.n_paths, 0.0, 5.0));

  std::vector<double> sq(o.n_paths);
  for (std::size_t p = 0; p < o.n_paths; ++p) sq[p] = paths[p][o.steps] * paths[p][o.steps];
  const auto ms = mean_stderr(sq);
  rows.push_back(compare_row("variance_volterra_T", "n=" + std::to_string(o.steps), ms.mean, ms.std_error,
                             o.n_paths, std::pow(o.horizon, 2.0 * o.h.value()), 3.0 * ms.std_error));
}

void deterministic_checks(const ValidationOptions& o, std::vector<ResultRow>& rows) {
  const double pairs[3][2] = {{1.0, 1.0}, {1.0, 0.5}, {0.7, 0.3}};
  for (const auto& p : pairs) {
    const double target = cov_rh(o.h, p[0], p[1]);
    std::ostringstream comp;
    comp << "t=" << p[0] << ";s=" << p[1];
    rows.push_back(compare_row("kernel_identity", comp.str(), kernel_covariance_quadrature(o.h, p[0], p[1]),
                               std::nullopt, 0, target, 1e-3 * std::abs(target)));
  }

  constexpr std::size_t kCells = 1024;
  const auto one = sample_uniform(1.0, kCells, [](double) { return 1.0; });
  // sin vanishes at the start; exp does not, so its images carry x^alpha terms
  const std::pair<const char*, SampledFunction> smooth[] = {
      {"sin", sample_uniform(1.0, kCells, [](double x) { return std::sin(x); })},
      {"exp", sample_uniform(1.0, kCells, [](double x) { return std::exp(x); })},
  };
  for (double alpha : {0.25, 0.4}) {
    const FracOrder a(alpha);
    const auto ic = frac_int_left(a, one);
    std::vector<double> exact(ic.size());
    for (std::size_t i = 0; i < ic.size(); ++i) exact[i] = std::pow(ic.grid[i], alpha) / special::gamma(alpha + 1.0);
    rows.push_back(compare_row("frac_int_constant", label("alpha", alpha), max_abs_diff(ic.values, exact),
                               std::nullopt, 0, 0.0, 1e-8));

    const double beta = 0.4;
    for (const auto& [name, f] : smooth) {
      const auto lhs = frac_int_left(a, frac_int_left(FracOrder(beta), f));
      const auto rhs = frac_int_left(FracOrder(alpha + beta), f);
      rows.push_back(compare_row("frac_semigroup", label("alpha", alpha) + ";beta=0.4;f=" + name,
                                 max_abs_diff(lhs.values, rhs.values), std::nullopt, 0, 0.0, 1e-6));
    }
    for (const auto& [name, f] : smooth) {
      const auto back = frac_deriv_left(a, frac_int_left(a, f));
      rows.push_back(compare_row("frac_inversion", label("alpha", alpha) + ";f=" + name,
                                 max_abs_diff(back.values, f.values), std::nullopt, 0, 0.0, 1e-4));
    }
  }

  constexpr std::size_t kShuffleCells = 2048;
  const auto s1 = sample_uniform(1.0, kShuffleCells, [](double) { return 1.0; });
  const auto sx = sample_uniform(1.0, kShuffleCells, [](double x) { return x; });
  const auto ssin = sample_uniform(1.0, kShuffleCells, [](double x) { return std::sin(3.0 * x); });
  const auto sexp = sample_uniform(1.0, kShuffleCells, [](double x) { return std::exp(-x); });
  struct Case {
    const SampledFunction* f1;
    const SampledFunction* f2;
    double theta, t;
    const char* name;
  };
  const Case cases[] = {{&s1, &s1, 0.0, 1.0, "f1=1;f2=1"}, {&sx, &s1, 0.0, 1.0, "f1=s;f2=1"},
                        {&ssin, &sexp, 0.25, 0.75, "f1=sin(3s);f2=exp(-s)"}};
  for (const Case& c : cases) {
    const auto r = shuffle_check(*c.f1, *c.f2, c.theta, c.t);
    rows.push_back(compare_row("shuffle_identity", c.name, r.lhs - r.rhs, std::nullopt, 0, 0.0, 1e-8));
  }

  // K_H^{-1} of phi(t) = t: s^(1/2-H) Gamma(3/2-H) / Gamma(2-2H).
  const double hv = o.h.value();
  const auto q = kh_inverse_ac(o.h, one);
  double worst = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    const double exact = std::pow(q.grid[i], 0.5 - hv) * special::gamma(1.5 - hv) / special::gamma(2.0 - 2.0 * hv);
    worst = std::max(worst, std::abs(q.values[i] - exact));
  }
  rows.push_back(compare_row("kh_inverse_linear", "n=1024", worst, std::nullopt, 0, 0.0, 1e-8));
}

void monte_carlo_checks(const ValidationOptions& o, std::vector<ResultRow>& rows) {
  const GridSpec grid(o.horizon, o.steps);
  const auto g = girsanov_check(o.h, DriftSpec::regime_switch(1.0, -1.0, 0.0), 0.0,
                                [](double x) { return std::tanh(x + 0.5); }, grid, o.n_paths, o.seed);
  rows.push_back(compare_row("girsanov_mean_xi", "regime(-1,1,0)", g.xi.mean, g.xi.std_error, o.n_paths, 1.0,
                             3.0 * g.xi.std_error));
  const double comb = std::hypot(g.reweighted.std_error, g.direct.std_error);
  rows.push_back(compare_row("girsanov_reweighting", "tanh(x+0.5)", g.reweighted.mean, g.reweighted.std_error,
                             o.n_paths, g.direct.mean, 3.0 * comb));

  const double strike = 0.5;
  const DeltaProblem problem{mollify(DriftSpec::zero(), default_epsilon(grid, o.h)), {0.0}, o.h,
                             WeightFn::uniform(o.horizon), grid, o.n_paths, o.seed};
  const Payoff payoffs[] = {Payoff::identity(), Payoff::digital(strike)};
  const auto est = estimate_deltas(problem, payoffs);
  rows.push_back(compare_row("delta_gaussian_identity", "x0", est[0].mean[0], est[0].std_error[0], o.n_paths, 1.0,
                             3.0 * est[0].std_error[0]));
  rows.push_back(compare_row("delta_gaussian_digital", "x0", est[1].mean[0], est[1].std_error[0], o.n_paths,
                             gaussian_digital_delta(0.0, strike, o.horizon, o.h), 3.0 * est[1].std_error[0]));
}

}  // namespace

std::vector<ResultRow> validation_suite(const ValidationOptions& opts) {
  if (opts.n_paths < 2) throw InvalidArgument("validation needs at least two paths");
  std::vector<ResultRow> rows;
  deterministic_checks(opts, rows);
  covariance_checks(opts, rows);
  monte_carlo_checks(opts, rows);
  return rows;
}

}  // namespace fbel
