#include <cmath>
#include <initializer_list>
#include <vector>

#include "doctest.h"
#include "fbel/error.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/parallel.hpp"
#include "fbel/rough_vol.hpp"

using namespace fbel;

namespace {

RVConfig config(double mu, double gamma, DriftSpec vol = DriftSpec::zero()) {
  return RVConfig{mu, VolMap(0.2, gamma), mollify(vol, 0.1), 1.0, 0.0, HurstParam(0.1)};
}

}  // namespace

TEST_SUITE("rough_vol") {
  TEST_CASE("volatility map") {
    const VolMap g(0.2, 0.3);
    CHECK(g.value(0.0) == doctest::Approx(0.35));
    CHECK(g.value(-50.0) >= 0.2);
    CHECK(g.value(50.0) <= 0.5 + 1e-15);
    const double d = 1e-6;
    CHECK(g.slope(0.4) == doctest::Approx((g.value(0.4 + d) - g.value(0.4 - d)) / (2 * d)).epsilon(1e-8));
    CHECK(g.curvature(0.4) == doctest::Approx((g.slope(0.4 + d) - g.slope(0.4 - d)) / (2 * d)).epsilon(1e-6));
    CHECK_THROWS(VolMap(0.0, 0.3));
    CHECK_THROWS(VolMap(0.2, -0.1));
  }

  TEST_CASE("path structure") {
    const GridSpec g(1.0, 64);
    const auto cfg = config(0.05, 0.3, DriftSpec::regime_switch(1.0, -1.0, 0.0));
    const RVModel m(cfg, g);
    const RVPath p = m.simulate({3, 4});
    for (std::size_t k = 0; k <= 64; ++k) {
      CHECK(p.ds_dx1[k] * cfg.x1 == doctest::Approx(p.s[k]).epsilon(1e-15));
      CHECK(p.s[k] > 0.0);
    }
    CHECK(p.dsigma_dx2[0] == 1.0);
    const auto t = m.terminal(cfg.x1, cfg.x2, {3, 4});
    CHECK(t.first == doctest::Approx(p.s[64]).epsilon(1e-14));
    CHECK(t.second == doctest::Approx(p.sigma[64]).epsilon(1e-14));
    // the two noises reseed independently
    const RVPath q = m.simulate({3, 4}, {3, 5});
    CHECK(q.sigma == p.sigma);
    CHECK(q.s != p.s);

    const RVPath flat = RVModel(config(0.0, 0.0), g).simulate({3, 4});
    for (double v : flat.ds_dx2) CHECK(v == 0.0);
  }

  TEST_CASE("constant volatility is a martingale") {
    const GridSpec g(1.0, 32);
    const RVModel m(config(0.0, 0.0), g);
    const std::size_t n = 20000;
    std::vector<double> st(n);
    for (std::size_t i = 0; i < n; ++i) st[i] = m.terminal(1.0, 0.0, {8, i}).first;
    const auto ms = mean_stderr(st);
    CHECK(std::abs(ms.mean - 1.0) <= 3.0 * ms.std_error);
  }

  TEST_CASE("deltas of the stock payoff") {
    const GridSpec g(1.0, 64);
    const RVPayoff stock = [](double s, double) { return s; };
    const auto d = sbel_delta(config(0.05, 0.3), stock, WeightFn::uniform(1.0), g, 20000, 12345, "stock");
    CHECK(std::abs(d.mean[0] - std::exp(0.05)) <= 3.0 * d.std_error[0]);
    const auto flat = sbel_delta(config(0.05, 0.0), stock, WeightFn::uniform(1.0), g, 20000, 12345, "stock");
    CHECK(std::abs(flat.mean[1]) <= 3.0 * flat.std_error[1]);
  }

  TEST_CASE("call deltas against finite differences") {
    const GridSpec g(1.0, 64);
    const auto cfg = config(0.05, 0.3, DriftSpec::regime_switch(1.0, -1.0, 0.0));
    const RVPayoff call = [](double s, double) { return std::max(s - 1.0, 0.0); };
    const auto d = sbel_delta(cfg, call, WeightFn::uniform(1.0), g, 20000, 12345, "call");
    const RVModel m(cfg, g);
    const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
      return call(m.terminal(x[0], x[1], seed).first, 0.0);
    };
    const std::vector<double> x{cfg.x1, cfg.x2};
    const auto fd = fd_delta(runner, x, 0.01, 20000, 12345);
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(d.mean[i] - fd.value[i]) <= 3.0 * std::hypot(d.std_error[i], fd.std_error[i]));
  }

  TEST_CASE("weights match their definitions") {
    const GridSpec g(1.0, 32);
    const auto cfg = config(0.05, 0.3);
    const RVModel m(cfg, g);
    const RVPath p = m.simulate({1, 1});
    const auto a = WeightFn::uniform(1.0);
    const BelWeightPlan plan(cfg.h, a, g);
    const auto w = rv_weights(p, cfg, a, plan);
    double w1 = 0.0, w2a = 0.0;
    for (std::size_t k = 0; k < 32; ++k) {
      const double c = a(g.time(k)) / (p.s[k] * cfg.g.value(p.sigma[k])) * p.dw_stock[k];
      w1 += c * p.ds_dx1[k];
      w2a += c * p.ds_dx2[k];
    }
    CHECK(w.w1 == doctest::Approx(w1).epsilon(1e-12));
    CHECK(w.w2a == doctest::Approx(w2a).epsilon(1e-12));
    FlowPath flow;
    flow.grid = g;
    flow.jac = p.dsigma_dx2;
    CHECK(w.w2b == doctest::Approx(plan.weight(flow, p.fbm)[0]).epsilon(1e-12));
  }

  TEST_CASE("invalid configuration") {
    auto cfg = config(0.05, 0.3);
    cfg.x1 = -1.0;
    CHECK_THROWS(cfg.validate());
    CHECK_THROWS(RVModel(cfg, GridSpec(1.0, 8)));
  }
}
