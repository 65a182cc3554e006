#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fbel/error.hpp"
#include "fbel/fbm_engine.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/payoff.hpp"
#include "fbel/sde_flow.hpp"

using namespace fbel;

TEST_SUITE("fd_oracle") {
  TEST_CASE("Gaussian digital delta") {
    const HurstParam h(0.1);
    CHECK(gaussian_digital_delta(0.0, 0.5, 1.0, h) == doctest::Approx(0.35206532676429948).epsilon(1e-14));
    CHECK(gaussian_digital_delta(2.0, 2.0, 4.0, h) ==
          doctest::Approx(1.0 / (std::sqrt(2 * std::numbers::pi) * std::pow(4.0, 0.1))));
    CHECK(gaussian_digital_delta(40.0, 0.5, 1.0, h) == doctest::Approx(0.0));
    CHECK(gaussian_digital_delta(-40.0, 0.5, 1.0, h) == doctest::Approx(0.0));
    CHECK_THROWS(gaussian_digital_delta(0.0, 0.5, 0.0, h));
  }

  TEST_CASE("linear runner is exact despite noise") {
    const ModelRunner runner = [](std::span<const double> x, PathSeed seed) {
      NormalStream z(seed, Stream::wiener);
      return 3.0 * x[0] - 2.0 * x[1] + 10.0 * z.next();
    };
    const std::vector<double> x{0.5, 1.5};
    const auto fd = fd_delta(runner, x, 0.01, 500, 1);
    CHECK(fd.value[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fd.value[1] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(fd.std_error[0] < 1e-10);
    CHECK_FALSE(fd.below_noise_floor);
    CHECK_THROWS(fd_delta(runner, x, 0.0, 500, 1));
  }

  TEST_CASE("zero-drift identity payoff") {
    const GridSpec g(1.0, 16);
    const VolterraSampler s(g, HurstParam(0.1));
    const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
      return x[0] + s.sample(1, seed).bh.back();
    };
    const std::vector<double> x{0.2};
    const auto fd = fd_delta(runner, x, 1e-2, 1000, 1);
    CHECK(fd.value[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fd.std_error[0] < 1e-12);
  }

  TEST_CASE("tiny bumps are reported") {
    const ModelRunner runner = [](std::span<const double> x, PathSeed seed) {
      NormalStream z(seed, Stream::wiener);
      return std::sin(x[0]) + 1e6 * (1.0 + 1e-3 * z.next());
    };
    const std::vector<double> x{0.2};
    const auto fd = fd_delta(runner, x, 1e-12, 200, 1);
    CHECK(fd.below_noise_floor);
    CHECK_FALSE(fd.note.empty());
  }

  TEST_CASE("digital delta against the closed form") {
    // X_T = x + B_T exactly in law for any grid, so a short grid is enough
    const HurstParam h(0.1);
    const GridSpec g(1.0, 8);
    const VolterraSampler s(g, h);
    const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
      return x[0] + s.sample(1, seed).bh.back() > 0.5 ? 1.0 : 0.0;
    };
    const std::vector<double> x{0.0};
    const auto fd = fd_delta(runner, x, 0.05, 100000, 12345);
    CHECK(std::abs(fd.value[0] - gaussian_digital_delta(0.0, 0.5, 1.0, h)) <= 3.0 * fd.std_error[0]);
    CHECK(default_bump(0.0, true) == 0.05);
    CHECK(default_bump(3.0, false) == doctest::Approx(0.03));
  }

  TEST_CASE("pairing with common random numbers reduces variance and bumps converge") {
    const HurstParam h(0.1);
    const GridSpec g(1.0, 64);
    const VolterraSampler s(g, h);
    const auto drift = mollify(DriftSpec::regime_switch(1.0, -1.0, 0.0), 0.1);
    const Payoff call = Payoff::call(0.0);
    const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
      return call(euler_solve(drift, x, s.sample(1, seed)).state(64));
    };
    const std::vector<double> x{0.0};
    const auto common = fd_delta(runner, x, 0.02, 2000, 3, FdPairing::common);
    const auto indep = fd_delta(runner, x, 0.02, 2000, 3, FdPairing::independent);
    CHECK(common.std_error[0] < indep.std_error[0]);
    const auto half = fd_delta(runner, x, 0.01, 2000, 3, FdPairing::common);
    CHECK(std::abs(common.value[0] - half.value[0]) <= 3.0 * std::hypot(common.std_error[0], half.std_error[0]));
  }
}
