// Batch front end: configure from a key=value file and flags, run one mode,
// print the results table and the paths of the written files.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fbel/fbel.h"

namespace {

int exit_code(fbel_status s) {
  switch (s) {
    case FBEL_OK: return 0;
    case FBEL_ERR_INVALID_ARGUMENT:
    case FBEL_ERR_DOMAIN:
    case FBEL_ERR_PARSE: return 2;
    case FBEL_ERR_NUMERICAL: return 3;
    case FBEL_ERR_IO: return 4;
    case FBEL_ERR_INTERNAL: return 5;
  }
  return 5;
}

int fail(fbel_status s) {
  std::fprintf(stderr, "fbel: %s: %s\n", fbel_status_name(s), fbel_last_error());
  return exit_code(s);
}

void print_num(double v) {
  if (std::isnan(v)) {
    std::printf(" %14s", "");
  } else {
    std::printf(" %14.7g", v);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta sensitivities for SDEs driven by rough fractional Brownian motion"};
  app.set_version_flag("--version", fbel_version());

  std::string config_file;
  app.add_option("--config", config_file, "key=value configuration file, applied before the flags")
      ->check(CLI::ExistingFile);

  // Flag name -> config key; values are forwarded as text and parsed once.
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"--mode", "mode"},         {"--hurst", "hurst"},     {"--horizon", "horizon"},
      {"--steps", "steps"},       {"--paths", "paths"},     {"--seed", "seed"},
      {"--dim", "dim"},           {"--drift", "drift"},     {"--epsilon", "epsilon"},
      {"--payoff", "payoff"},     {"--strike", "strike"},   {"--weight-fn", "weight_fn"},
      {"--x0", "x0"},             {"--x1", "x1"},           {"--x2", "x2"},
      {"--mu", "mu"},             {"--g-alpha", "g_alpha"}, {"--g-gamma", "g_gamma"},
      {"--bump", "bump"},         {"--dump-paths", "dump_paths"}, {"--out", "out"},
  };
  const char* help[] = {
      "paths | delta-sde | delta-rv | validate",
      "Hurst exponent, 0 < h < 1/2",
      "time horizon T",
      "grid steps",
      "Monte-Carlo paths",
      "master seed",
      "state dimension (delta-sde, paths)",
      "zero | linear:L | regime:b1,b2,R | regime-ou:a1,a2,R,level",
      "mollification width, or auto",
      "identity | call | put | digital",
      "strike of call, put and digital",
      "uniform | ramp | reverse-ramp",
      "initial state, one value or a comma list",
      "initial stock price (delta-rv)",
      "initial volatility factor (delta-rv)",
      "stock drift rate (delta-rv)",
      "volatility floor alpha of g (delta-rv)",
      "volatility range gamma of g (delta-rv)",
      "finite-difference bump, or auto",
      "paths written by the paths mode",
      "results CSV; the resolved config goes to <out>.resolved.cfg",
  };
  std::vector<std::string> values(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) app.add_option(keys[i].first, values[i], help[i]);

  CLI11_PARSE(app, argc, argv);

  fbel_config* cfg = nullptr;
  if (fbel_status s = fbel_config_create(&cfg); s != FBEL_OK) return fail(s);
  auto cleanup = [&](int code) {
    fbel_config_destroy(cfg);
    return code;
  };
  if (!config_file.empty()) {
    if (fbel_status s = fbel_config_load(cfg, config_file.c_str()); s != FBEL_OK) return cleanup(fail(s));
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (app.count(keys[i].first) == 0) continue;
    if (fbel_status s = fbel_config_set(cfg, keys[i].second.c_str(), values[i].c_str()); s != FBEL_OK) {
      std::fprintf(stderr, "fbel: %s: %s\n", keys[i].first.c_str(), fbel_last_error());
      return cleanup(exit_code(s));
    }
  }

  fbel_result* result = nullptr;
  if (fbel_status s = fbel_run(cfg, &result); s != FBEL_OK) return cleanup(fail(s));

  for (std::size_t i = 0; i < fbel_result_advisory_count(result); ++i) {
    std::printf("%s\n", fbel_result_advisory(result, i));
  }
  std::printf("%-28s %-30s %14s %14s %14s %14s  %s\n", "quantity", "component", "estimate", "stderr", "target",
              "tolerance", "pass");
  for (std::size_t i = 0; i < fbel_result_row_count(result); ++i) {
    fbel_row row{};
    fbel_result_row(result, i, &row);
    std::printf("%-28s %-30s", row.quantity, row.component);
    print_num(row.estimate);
    print_num(row.std_error);
    print_num(row.target);
    print_num(row.tolerance);
    std::printf("  %s\n", row.pass < 0 ? "" : (row.pass ? "pass" : "FAIL"));
  }
  std::printf("results: %s\nconfig: %s\n", fbel_result_results_path(result), fbel_result_config_path(result));
  const int code = fbel_result_failed(result) ? 1 : 0;
  fbel_result_destroy(result);
  return cleanup(code);
}
