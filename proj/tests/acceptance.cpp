// Acceptance suite: one PASS/FAIL line per criterion at full problem sizes.
// Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fbel/bel_weight.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/girsanov.hpp"
#include "fbel/rough_vol.hpp"
#include "fbel/run.hpp"
#include "fbel/special.hpp"
#include "fbel/validation.hpp"

using namespace fbel;

namespace {

constexpr std::uint64_t kSeed = 12345;

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }

  // informational, never changes the verdict
  void note(const std::string& what) { detail += "; info: " + what; }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// |est - target| <= 3 se, reported in units of se
void within_3se(Verdict& v, const std::string& name, double est, double se, double target) {
  v.check(std::abs(est - target) <= 3.0 * se,
          name + fmt(" %.5f +- %.5f vs %.5f (%.2f se)", est, se, target, std::abs(est - target) / se));
}

Verdict covariance_fidelity() {
  Verdict v;
  const GridSpec g(1.0, 64);
  const HurstParam h(0.1);
  const CholeskySampler c(g, h);
  std::vector<std::vector<double>> paths(20000);
  for (std::size_t p = 0; p < paths.size(); ++p) paths[p] = c.sample({kSeed, p}).values;
  const auto r = covariance_report(paths, g, h);
  v.check(r.max_deviation_se <= 5.0 && !r.degenerate, fmt("max deviation %.2f se over 64x64 entries", r.max_deviation_se));
  return v;
}

Verdict volterra_representation() {
  Verdict v;
  const GridSpec g(1.0, 512);
  for (double hv : {0.05, 0.1}) {
    const VolterraSampler s(g, HurstParam(hv));
    std::vector<double> end(20000);
    parallel_for(end.size(), [&](std::size_t p) { end[p] = s.sample(1, {kSeed, p}).bh.back(); });
    const auto m = mean_stderr(end);
    std::vector<double> sq(end.size());
    for (std::size_t p = 0; p < end.size(); ++p) sq[p] = (end[p] - m.mean) * (end[p] - m.mean);
    const double var = compensated_sum(sq) / (end.size() - 1.0);
    v.check(std::abs(var - 1.0) <= 0.02,
            fmt("h=%.2f Var(B_T)=%.4f (sampling sd %.4f)", hv, var, std::sqrt(2.0 / (end.size() - 1.0))));
  }
  // bias diagnostic on ten times the paths
  {
    const VolterraSampler s(g, HurstParam(0.05));
    std::vector<double> sq(200000);
    parallel_for(sq.size(), [&](std::size_t p) {
      const double b = s.sample(1, {kSeed, p}).bh.back();
      sq[p] = b * b;
    });
    const auto m = mean_stderr(sq);
    v.note(fmt("h=0.05 E[B_T^2] over 2e5 paths %.4f +- %.4f", m.mean, m.std_error));
  }
  const HurstParam h(0.1);
  for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}, std::pair{0.7, 0.3}}) {
    const double q = kernel_covariance_quadrature(h, t, s), target = cov_rh(h, t, s);
    v.check(std::abs(q / target - 1.0) <= 1e-3, fmt("kernel identity (%.1f,%.1f) rel %.1e", t, s, std::abs(q / target - 1.0)));
  }
  return v;
}

Verdict fractional_operators() {
  Verdict v;
  const std::size_t n = 1024;
  const auto one = sample_uniform(1.0, n, [](double) { return 1.0; });
  const std::pair<const char*, SampledFunction> fs[] = {
      {"sin", sample_uniform(1.0, n, [](double x) { return std::sin(x); })},
      {"exp", sample_uniform(1.0, n, [](double x) { return std::exp(x); })},
  };
  double worst_c = 0.0, worst_s = 0.0, worst_i = 0.0;
  for (double alpha : {0.25, 0.4}) {
    const auto ic = frac_int_left(FracOrder(alpha), one);
    std::vector<double> exact(ic.size());
    for (std::size_t i = 0; i < ic.size(); ++i) exact[i] = std::pow(ic.grid[i], alpha) / std::tgamma(alpha + 1.0);
    worst_c = std::max(worst_c, max_abs_diff(ic.values, exact));
    for (const auto& [name, f] : fs) {
      const auto lhs = frac_int_left(FracOrder(alpha), frac_int_left(FracOrder(0.4), f));
      const auto rhs = frac_int_left(FracOrder(alpha + 0.4), f);
      worst_s = std::max(worst_s, max_abs_diff(lhs.values, rhs.values));
      const auto back = frac_deriv_left(FracOrder(alpha), frac_int_left(FracOrder(alpha), f));
      worst_i = std::max(worst_i, max_abs_diff(back.values, f.values));
    }
  }
  v.check(worst_c <= 1e-8, fmt("I^a 1 err %.1e", worst_c));
  v.check(worst_s <= 1e-6, fmt("semigroup err %.1e", worst_s));
  v.check(worst_i <= 1e-4, fmt("D^a I^a err %.1e", worst_i));
  return v;
}

Verdict shuffle_identity() {
  Verdict v;
  const std::size_t n = 2048;
  const auto one = sample_uniform(1.0, n, [](double) { return 1.0; });
  const auto lin = sample_uniform(1.0, n, [](double s) { return s; });
  const auto f1 = sample_uniform(1.0, n, [](double s) { return std::sin(3 * s); });
  const auto f2 = sample_uniform(1.0, n, [](double s) { return std::exp(-s); });
  const auto a = shuffle_check(one, one, 0.0, 1.0);
  const auto b = shuffle_check(lin, one, 0.0, 1.0);
  const auto c = shuffle_check(f1, f2, 0.25, 0.75);
  for (auto [name, r] : {std::pair{"1,1", a}, std::pair{"s,1", b}, std::pair{"sin3s,exp-s", c}})
    v.check(std::abs(r.lhs - r.rhs) <= 1e-8, std::string(name) + fmt(" |lhs-rhs|=%.1e", std::abs(r.lhs - r.rhs)));
  v.check(std::abs(a.lhs - 1.0) <= 1e-12 && std::abs(b.lhs - 0.5) <= 1e-12, "closed-form values");
  return v;
}

Verdict bel_constant() {
  Verdict v;
  const HurstParam h(0.1);
  const GridSpec g(1.0, 256);
  const DeltaProblem prob{mollify(DriftSpec::zero(), default_epsilon(g, h)), {0.0}, h, WeightFn::uniform(1.0), g, 100000, kSeed};
  const Payoff payoffs[] = {Payoff::identity(), Payoff::digital(0.5)};
  const auto est = estimate_deltas(prob, payoffs);
  within_3se(v, "identity", est[0].mean[0], est[0].std_error[0], 1.0);
  within_3se(v, "digital", est[1].mean[0], est[1].std_error[0], gaussian_digital_delta(0.0, 0.5, 1.0, h));
  return v;
}

Verdict singular_drift() {
  Verdict v;
  const HurstParam h(0.1);
  const GridSpec g(1.0, 256);
  const auto drift = mollify(DriftSpec::regime_switch(1.0, -1.0, 0.0), 0.05);
  const Payoff call = Payoff::call(0.5);
  const std::size_t n = 100000;
  const DeltaProblem prob{drift, {0.0}, h, WeightFn::uniform(1.0), g, n, kSeed};
  const auto bel = estimate_delta(prob, call);
  const VolterraSampler s(g, h);
  const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
    return call(euler_solve(drift, x, s.sample(1, seed)).state(g.n_steps()));
  };
  const std::vector<double> x0{0.0};
  const auto fd = fd_delta(runner, x0, default_bump(0.0, false), n, kSeed);
  const double comb = std::hypot(bel.std_error[0], fd.std_error[0]);
  v.check(std::abs(bel.mean[0] - fd.value[0]) <= 3.0 * comb && !fd.below_noise_floor,
          fmt("BEL %.5f +- %.5f vs FD %.5f +- %.5f", bel.mean[0], bel.std_error[0], fd.value[0], fd.std_error[0]) +
              fmt(" (%.2f combined se)", std::abs(bel.mean[0] - fd.value[0]) / comb));
  return v;
}

Verdict flow_check() {
  Verdict v;
  const HurstParam h(0.1);
  const std::size_t n = 1024;
  const GridSpec g(1.0, n);
  const auto drift = mollify(DriftSpec::linear(0.5), 1.0);
  const VolterraSampler s(g, h);
  const double delta = 1e-4;
  double worst_j = 0.0, worst_fd = 0.0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    const JointPath path = s.sample(1, {kSeed, p});
    const std::vector<double> x{0.3}, up{0.3 + delta}, dn{0.3 - delta};
    const double j = flow_derivative(drift, euler_solve(drift, x, path)).at(n);
    const double fd = (euler_solve(drift, up, path).at(n) - euler_solve(drift, dn, path).at(n)) / (2 * delta);
    worst_j = std::max(worst_j, std::abs(j / std::exp(0.5) - 1.0));
    worst_fd = std::max(worst_fd, std::abs(fd / j - 1.0));
  }
  v.check(worst_j <= 1e-2, fmt("J_T vs e^0.5 rel %.1e", worst_j));
  v.check(worst_fd <= 1e-2, fmt("FD vs flow rel %.1e over 100 paths", worst_fd));

  // the same pathwise check through a mollified singular drift
  const auto rs = mollify(DriftSpec::regime_switch(1.0, -1.0, 0.0), 0.05);
  double worst_rs = 0.0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    const JointPath path = s.sample(1, {kSeed, p});
    const std::vector<double> x{0.0}, up{delta}, dn{-delta};
    const double j = flow_derivative(rs, euler_solve(rs, x, path)).at(n);
    const double fd = (euler_solve(rs, up, path).at(n) - euler_solve(rs, dn, path).at(n)) / (2 * delta);
    worst_rs = std::max(worst_rs, std::abs(fd / j - 1.0));
  }
  v.check(worst_rs <= 1e-2, fmt("FD vs flow (regime, eps=0.05) rel %.1e", worst_rs));
  return v;
}

Verdict girsanov() {
  Verdict v;
  const HurstParam h(0.1);
  const GridSpec g(1.0, 256);
  const std::size_t n = 100000;
  const auto drift = DriftSpec::regime_switch(1.0, -1.0, 0.0);
  const GirsanovPlan plan(h, g);
  const VolterraSampler s(g, h);
  std::vector<double> xi(n);
  parallel_for(n, [&](std::size_t p) { xi[p] = plan.weight(drift, s.sample(1, {kSeed, p}), 0.0).xi; });
  const auto m = mean_stderr(xi);
  within_3se(v, "E[xi]", m.mean, m.std_error, 1.0);
  const auto r = girsanov_check(h, drift, 0.0, [](double x) { return std::tanh(x + 0.5); }, g, n, kSeed);
  const double comb = std::hypot(r.reweighted.std_error, r.direct.std_error);
  v.check(std::abs(r.reweighted.mean - r.direct.mean) <= 3.0 * comb,
          fmt("reweighted %.5f +- %.5f vs direct %.5f +- %.5f", r.reweighted.mean, r.reweighted.std_error, r.direct.mean,
              r.direct.std_error));
  return v;
}

Verdict rough_vol() {
  Verdict v;
  const HurstParam h(0.1);
  const GridSpec g(1.0, 256);
  const std::size_t n = 100000;
  const auto vol = mollify(DriftSpec::regime_switch(1.0, -1.0, 0.0), 0.05);
  const RVConfig cfg{0.05, VolMap(0.2, 0.3), vol, 1.0, 0.0, h};
  const RVPayoff payoffs[] = {[](double s, double) { return s; }, [](double s, double) { return std::max(s - 1.0, 0.0); }};
  const std::string names[] = {"stock", "call:1"};
  const RVProblem prob{cfg, WeightFn::uniform(1.0), g, n, kSeed};
  const auto est = sbel_deltas(prob, payoffs, names);
  within_3se(v, "stock d/dx1", est[0].mean[0], est[0].std_error[0], std::exp(0.05));

  RVConfig flat = cfg;
  flat.g = VolMap(0.2, 0.0);
  const RVProblem flat_prob{flat, WeightFn::uniform(1.0), g, n, kSeed};
  const auto est0 = sbel_deltas(flat_prob, std::span<const RVPayoff>(payoffs, 1), std::span<const std::string>(names, 1));
  within_3se(v, "gamma=0 stock d/dx2", est0[0].mean[1], est0[0].std_error[1], 0.0);

  const RVModel model(cfg, g);
  const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
    return std::max(model.terminal(x[0], x[1], seed).first - 1.0, 0.0);
  };
  const double x[2] = {cfg.x1, cfg.x2};
  const auto fd = fd_delta(runner, x, default_bump(1.0, false), n, kSeed);
  for (std::size_t i = 0; i < 2; ++i) {
    const double comb = std::hypot(est[1].std_error[i], fd.std_error[i]);
    v.check(std::abs(est[1].mean[i] - fd.value[i]) <= 3.0 * comb,
            std::string(i == 0 ? "call d/dx1" : "call d/dx2") +
                fmt(" SBEL %.5f +- %.5f vs FD %.5f +- %.5f", est[1].mean[i], est[1].std_error[i], fd.value[i],
                    fd.std_error[i]));
  }
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict reproducibility() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "fbel_acceptance";
  std::filesystem::create_directories(dir);
  RunConfig c;
  c.drift = "regime:1,-1,0";
  c.epsilon = 0.05;
  c.payoff = "call";
  c.paths = 20000;
  c.steps = 128;
  auto run_with = [&](const char* threads, const std::string& name, const RunConfig& base) {
    setenv("FBEL_THREADS", threads, 1);
    RunConfig r = base;
    r.out = (dir / name).string();
    fbel::run(r);
    return r;
  };
  const RunConfig a = run_with("1", "a.csv", c);
  const RunConfig b = run_with("1", "b.csv", RunConfig::load(a.config_path()));
  const RunConfig t4 = run_with("4", "t4.csv", c);
  const RunConfig t3 = run_with("3", "t3.csv", c);
  unsetenv("FBEL_THREADS");
  const std::string ref = slurp(a.out);
  v.check(!ref.empty() && ref == slurp(b.out), "rerun of resolved config bit-identical at 1 thread");
  v.check(ref == slurp(t4.out) && ref == slurp(t3.out), "1, 3 and 4 threads bit-identical");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> body;
  };
  const Criterion criteria[] = {
      {"covariance fidelity (Cholesky, h=0.1, N=64, 20000 paths)", covariance_fidelity},
      {"Volterra variance (N=512, 20000 paths) and kernel identity", volterra_representation},
      {"fractional operators (N=1024)", fractional_operators},
      {"shuffle identity (N=2048)", shuffle_identity},
      {"delta constant, zero drift (N=256, 1e5 paths)", bel_constant},
      {"singular drift, BEL vs FD (eps=0.05, call K=0.5, 1e5 paths)", singular_drift},
      {"first variation (linear 0.5, N=1024)", flow_check},
      {"Girsanov density (N=256, 1e5 paths)", girsanov},
      {"rough volatility deltas (N=256, 1e5 paths)", rough_vol},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", index++, v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed;
}
