#include <cmath>
#include <initializer_list>
#include <vector>

#include "doctest.h"
#include "fbel/error.hpp"
#include "fbel/girsanov.hpp"

using namespace fbel;

TEST_SUITE("girsanov") {
  const HurstParam h(0.1);

  TEST_CASE("zero drift is the fixed point") {
    const GridSpec g(1.0, 64);
    const JointPath p = sample_joint_path(g, h, 1, {1, 2});
    const auto w = girsanov_xi(h, DriftSpec::zero(), p, 0.3);
    CHECK(w.xi == 1.0);
    CHECK(w.log_xi == 0.0);
  }

  TEST_CASE("constant drift gives the inverse kernel of a linear function") {
    // u = c, int u = c t, so q = c s^(1/2-H) Gamma(3/2-H) / (Gamma(2-2H) c_H Gamma(H+1/2))
    const GridSpec g(1.0, 128);
    const JointPath p = sample_joint_path(g, h, 1, {1, 2});
    const auto drift = DriftSpec::regime_switch(0.7, 0.7, 0.0);
    const GirsanovPlan plan(h, g);
    const auto q = plan.density_integrand(drift, p, 0.0);
    const double c = 0.7 * std::tgamma(1.4) / (std::tgamma(1.8) * c_h(h) * std::tgamma(0.6));
    CHECK(q[0] == 0.0);
    for (std::size_t k = 1; k <= 128; ++k) CHECK(q[k] == doctest::Approx(c * std::pow(g.time(k), 0.4)).epsilon(1e-10));
    double lx = 0.0;
    for (std::size_t k = 0; k < 128; ++k) lx += -q[k] * p.dW(k) - 0.5 * q[k] * q[k] * g.step();
    const auto w = plan.weight(drift, p, 0.0);
    CHECK(w.log_xi == doctest::Approx(lx).epsilon(1e-12));
    CHECK(w.xi == doctest::Approx(std::exp(lx)));
  }

  TEST_CASE("density is positive with unit mean") {
    const GridSpec g(1.0, 64);
    const GirsanovPlan plan(h, g);
    const VolterraSampler s(g, h);
    const auto drift = DriftSpec::regime_switch(1.0, -1.0, 0.0);
    const std::size_t n = 20000;
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto w = plan.weight(drift, s.sample(1, {12345, i}), 0.0);
      CHECK(w.xi > 0.0);
      CHECK(std::isfinite(w.log_xi));
      xi[i] = w.xi;
    }
    const auto m = mean_stderr(xi);
    CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.std_error);
  }

  TEST_CASE("reweighted and direct estimates agree") {
    const GridSpec g(1.0, 64);
    const auto r = girsanov_check(h, DriftSpec::regime_switch(0.5, 0.5, 0.0), 0.0,
                                  [](double x) { return std::tanh(x); }, g, 20000, 12345);
    CHECK(std::abs(r.reweighted.mean - r.direct.mean) <=
          3.0 * std::hypot(r.reweighted.std_error, r.direct.std_error));
    CHECK(std::abs(r.xi.mean - 1.0) <= 3.0 * r.xi.std_error);
    CHECK(r.n_paths == 20000);
  }

  TEST_CASE("non-finite drift is an error") {
    const GridSpec g(1.0, 16);
    const JointPath p = sample_joint_path(g, h, 1, {1, 2});
    const auto bad = DriftSpec::custom(
        [](double, std::span<const double>, std::span<double> out) { out[0] = std::nan(""); }, {}, 1.0, 1.0, "nan");
    CHECK_THROWS_AS(girsanov_xi(h, bad, p, 0.0), NumericalError);
  }
}
