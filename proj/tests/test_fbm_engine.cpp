#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fbel/error.hpp"
#include "fbel/fbm_engine.hpp"

using namespace fbel;

TEST_SUITE("fbm_engine") {
  TEST_CASE("grid") {
    const GridSpec g(2.0, 8);
    CHECK(g.step() == 0.25);
    CHECK(g.time(8) == 2.0);
    CHECK(g.times().size() == 9);
    CHECK_THROWS(GridSpec(0.0, 4));
    CHECK_THROWS(GridSpec(1.0, 0));
  }

  TEST_CASE("cell weights against high-precision cell integrals") {
    const VolterraSampler s(GridSpec(1.0, 4), HurstParam(0.1));
    // 4 * int over the cell of K_H(t_k, s), 30-digit quadrature
    CHECK(s.weight(4, 0) == doctest::Approx(0.89239302017579539).epsilon(1e-9));
    CHECK(s.weight(4, 3) == doctest::Approx(1.0673635761748741).epsilon(1e-9));
    CHECK(s.weight(2, 1) == doctest::Approx(1.1069849075631308).epsilon(1e-9));
  }

  TEST_CASE("joint path structure and determinism") {
    const GridSpec g(1.0, 32);
    const VolterraSampler s(g, HurstParam(0.1));
    const JointPath p = s.sample(2, {5, 9});
    CHECK(p.dw.size() == 64);
    CHECK(p.bh.size() == 66);
    CHECK(p.BH(0, 0) == 0.0);
    CHECK(p.BH(0, 1) == 0.0);
    const JointPath q = s.sample(2, {5, 9});
    CHECK(p.bh == q.bh);
    CHECK(p.dw == q.dw);
    CHECK(s.consistency_error(p) < 1e-12);
    const JointPath r = s.from_increments(p.dw, 2, {5, 9});
    CHECK(r.bh == p.bh);
    CHECK(s.sample(2, {5, 10}).bh != p.bh);

    const VolterraSampler avg(g, HurstParam(0.1), VolterraScheme::cell_average);
    const JointPath a = avg.sample(1, {5, 9});
    for (double v : a.residual) CHECK(v == 0.0);
    CHECK(avg.consistency_error(a) < 1e-12);
  }

  TEST_CASE("Cholesky reference sampler") {
    const GridSpec g(1.0, 16);
    const CholeskySampler c(g, HurstParam(0.1));
    const auto a = c.sample({1, 2}), b = c.sample({1, 2});
    CHECK(a.values == b.values);
    CHECK(a.values[0] == 0.0);
    CHECK(a.size() == 17);
    CHECK_THROWS(CholeskySampler(GridSpec(1.0, 5000), HurstParam(0.1)));
  }

  TEST_CASE("covariance of both samplers") {
    const GridSpec g(1.0, 16);
    const HurstParam h(0.1);
    const std::size_t n = 5000;
    std::vector<std::vector<double>> chol(n), volt(n);
    const CholeskySampler c(g, h);
    const VolterraSampler v(g, h);
    for (std::size_t p = 0; p < n; ++p) {
      chol[p] = c.sample({77, p}).values;
      volt[p] = v.sample(1, {77, p}).bh;
    }
    const auto rc = covariance_report(chol, g, h);
    const auto rv = covariance_report(volt, g, h);
    CHECK_FALSE(rc.degenerate);
    CHECK(rc.max_deviation_se <= 5.0);
    CHECK(rv.max_deviation_se <= 5.0);
    CHECK(rc.n_paths == n);
  }

  TEST_CASE("cell averaging alone loses variance; the residual restores it") {
    const GridSpec g(1.0, 64);
    const HurstParam h(0.1);
    const std::size_t n = 4000;
    const VolterraSampler exact(g, h), avg(g, h, VolterraScheme::cell_average);
    double se = 0.0, sa = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      const double x = exact.sample(1, {3, p}).bh.back(), y = avg.sample(1, {3, p}).bh.back();
      se += x * x;
      sa += y * y;
    }
    se /= n;
    sa /= n;
    CHECK(std::abs(se - 1.0) < 3.0 * std::sqrt(2.0 / n));
    CHECK(sa < 0.9);
  }

  TEST_CASE("degenerate input is flagged") {
    const GridSpec g(1.0, 4);
    std::vector<std::vector<double>> paths(10, std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4});
    const auto r = covariance_report(paths, g, HurstParam(0.1));
    CHECK(r.degenerate);
    std::vector<std::vector<double>> one(1, std::vector<double>(5, 0.0));
    CHECK_THROWS(covariance_report(one, g, HurstParam(0.1)));
  }

  TEST_CASE("paths CSV") {
    const GridSpec g(1.0, 2);
    const VolterraSampler v(g, HurstParam(0.2));
    std::vector<JointPath> ps{v.sample(2, {1, 0})};
    std::ostringstream os;
    write_paths_csv(os, ps, 4);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "path_index,k,t_k,dW_0,dW_1,bh_0,bh_1");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
    CHECK(os.str().find("\n4,0,0,") != std::string::npos);
  }
}
