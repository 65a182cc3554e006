#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fbel/error.hpp"
#include "fbel/run.hpp"

using namespace fbel;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "fbel_test_run";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

bool has_advisory(const RunReport& r, const std::string& needle) {
  for (const auto& a : r.advisories)
    if (a.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("run") {
  TEST_CASE("modes and drifts parse") {
    CHECK(parse_mode("delta-rv") == RunMode::delta_rv);
    CHECK(mode_name(RunMode::validate) == "validate");
    CHECK_THROWS_AS(parse_mode("fit"), InvalidArgument);
    CHECK(parse_drift("zero").kind() == DriftSpec::Kind::zero);
    CHECK(parse_drift("linear:0.5").lambda() == 0.5);
    const auto rs = parse_drift("regime:1,-1,0.25");
    CHECK(rs.upper() == 1.0);
    CHECK(rs.lower() == -1.0);
    CHECK(rs.threshold() == 0.25);
    CHECK(parse_drift("regime-ou:2,1,0,0.5").level() == 0.5);
    CHECK_THROWS(parse_drift("regime:1,2"));
    CHECK_THROWS(parse_drift("linear:x"));
  }

  TEST_CASE("config text") {
    const auto c = RunConfig::parse("# comment\nmode = delta-rv\nhurst=0.05\nweight-fn=ramp\nx0=0.1,0.2\n\nepsilon=auto\n");
    CHECK(c.mode == RunMode::delta_rv);
    CHECK(c.hurst == 0.05);
    CHECK(c.weight_fn == "ramp");
    CHECK(c.x0.size() == 2);
    CHECK_FALSE(c.epsilon.has_value());
    try {
      RunConfig::parse("hurst=0.1\nsteps=12\nbogus=1\n");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    try {
      RunConfig::parse("hurst=0.1\nno equals sign\n");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS(RunConfig::parse("steps=-3\n"));
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/fbel.cfg"), IoError);
  }

  TEST_CASE("resolved config round trips") {
    RunConfig c;
    c.set("hurst", "0.13");
    c.set("drift", "regime:1,-1,0");
    c.set("x0", "0.3");
    const auto back = RunConfig::parse(c.resolved());
    CHECK(back.resolved() == c.resolved());
    CHECK(back.epsilon.has_value());
    CHECK(*back.epsilon == c.resolved_epsilon());
    CHECK(back.hurst == 0.13);
  }

  TEST_CASE("validity advisories") {
    CHECK(validity_advisories(HurstParam(0.1), 1).empty());
    const auto soft = validity_advisories(HurstParam(0.15), 1);
    REQUIRE(soft.size() == 1);
    CHECK(soft[0].rfind("note:", 0) == 0);
    const auto hard = validity_advisories(HurstParam(0.3), 1);
    REQUIRE(hard.size() == 1);
    CHECK(hard[0].find("outside proven validity") != std::string::npos);
    CHECK_FALSE(validity_advisories(HurstParam(0.1), 2).empty());
  }

  TEST_CASE("delta-sde with an out-of-regime Hurst exponent") {
    RunConfig c;
    c.hurst = 0.3;
    c.paths = 4000;
    c.steps = 64;
    c.out = scratch("sde.csv");
    const auto r = run(c);
    CHECK(has_advisory(r, "outside proven validity"));
    CHECK_FALSE(r.failed);
    const auto csv = slurp(c.out);
    CHECK(csv.rfind("quantity,component,estimate,stderr,n_paths,target,tolerance,pass\n", 0) == 0);
    CHECK(csv.find("delta_bel_vs_exact,x0_0,") != std::string::npos);
    for (const auto& row : r.rows)
      if (row.quantity == "delta_bel_vs_exact") CHECK(*row.pass);
    const auto cfg = slurp(c.config_path());
    CHECK(cfg.find("outside proven validity") != std::string::npos);
    CHECK(cfg.find("hurst=0.29999999999999999") != std::string::npos);
  }

  TEST_CASE("rerunning the resolved config is bit-identical") {
    RunConfig c;
    c.drift = "regime:1,-1,0";
    c.payoff = "call";
    c.strike = 0.0;
    c.paths = 2000;
    c.steps = 32;
    c.out = scratch("first.csv");
    run(c);
    auto again = RunConfig::load(c.config_path());
    again.out = scratch("second.csv");
    run(again);
    CHECK(slurp(c.out) == slurp(again.out));
  }

  TEST_CASE("delta-rv and paths modes") {
    RunConfig c;
    c.mode = RunMode::delta_rv;
    c.paths = 2000;
    c.steps = 32;
    c.out = scratch("rv.csv");
    const auto r = run(c);
    CHECK(slurp(c.out).find("delta_sbel,x1,") != std::string::npos);
    CHECK_FALSE(r.failed);

    c.mode = RunMode::paths;
    c.dim = 2;
    c.dump_paths = 3;
    c.out = scratch("paths.csv");
    const auto p = run(c);
    const auto dump = slurp(c.out + ".paths.csv");
    CHECK(dump.rfind("path_index,k,t_k,dW_0,dW_1,bh_0,bh_1\n", 0) == 0);
    for (const auto& row : p.rows)
      if (row.pass) CHECK(*row.pass);
  }

  TEST_CASE("unwritable output is an I/O error") {
    RunConfig c;
    c.paths = 10;
    c.steps = 8;
    c.out = "/nonexistent/dir/out.csv";
    CHECK_THROWS_AS(run(c), IoError);
  }
}
