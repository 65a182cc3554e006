#include <cmath>
#include <initializer_list>
#include <limits>

#include "doctest.h"
#include "fbel/special.hpp"

using namespace fbel;

TEST_SUITE("special") {
  TEST_CASE("gamma agrees with the standard library") {
    for (double x : {0.05, 0.3, 0.5, 0.6, 1.0, 1.4, 2.5, 7.25, 30.0}) {
      CHECK(special::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
      CHECK(special::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    }
    // negative argument through reflection
    CHECK(special::gamma(-1.5) == doctest::Approx(2.3632718012073547).epsilon(1e-13));
    CHECK(special::log_gamma(50.5) == doctest::Approx(146.51925549072063).epsilon(1e-14));
  }

  TEST_CASE("beta and incomplete beta") {
    CHECK(special::beta(0.8, 0.6) == doctest::Approx(1.9540545115390976).epsilon(1e-13));
    CHECK(special::beta(0.8, 0.6) ==
          doctest::Approx(std::tgamma(0.8) * std::tgamma(0.6) / std::tgamma(1.4)).epsilon(1e-13));
    // reference values from 30-digit arithmetic
    CHECK(special::incomplete_beta(0.3, 0.8, 0.6) == doctest::Approx(0.50674268578454224).epsilon(1e-13));
    CHECK(special::incomplete_beta(0.9, 0.8, 0.6) == doctest::Approx(1.532144428461084).epsilon(1e-13));
    CHECK(special::incomplete_beta_upper(0.95, 0.8, 0.6) == doctest::Approx(0.27725991296997158).epsilon(1e-13));
    CHECK(special::incomplete_beta(0.0, 0.8, 0.6) == 0.0);
    CHECK(special::incomplete_beta(1.0, 0.8, 0.6) == doctest::Approx(special::beta(0.8, 0.6)).epsilon(1e-14));
    CHECK(special::incomplete_beta_between(0.3, 0.9, 0.8, 0.6) ==
          doctest::Approx(1.532144428461084 - 0.50674268578454224).epsilon(1e-13));
  }

  TEST_CASE("incomplete beta against midpoint quadrature of a smooth integrand") {
    // a, b >= 1: no endpoint singularity, so a plain rule is an independent check
    const double a = 2.5, b = 1.5, x = 0.7;
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = (i + 0.5) * x / n;
      s += std::pow(y, a - 1.0) * std::pow(1.0 - y, b - 1.0);
    }
    CHECK(special::incomplete_beta(x, a, b) == doctest::Approx(s * x / n).epsilon(1e-9));
  }
}
