#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbel/frac_core.hpp"
#include "fbel/report.hpp"
#include "fbel/sde_flow.hpp"

namespace fbel {

enum class RunMode { paths, delta_sde, delta_rv, validate };

RunMode parse_mode(std::string_view text);
std::string_view mode_name(RunMode mode);

/// "zero", "linear:L", "regime:b1,b2,R" or "regime-ou:a1,a2,R,level".
DriftSpec parse_drift(std::string_view text);

/// Flat run description, read from key=value text and overridable key by key.
struct RunConfig {
  RunMode mode = RunMode::delta_sde;
  double hurst = 0.1;
  double horizon = 1.0;
  std::size_t steps = 256;
  std::size_t paths = 10000;
  std::uint64_t seed = 12345;
  std::size_t dim = 1;
  std::string drift = "zero";
  std::optional<double> epsilon;  // default_epsilon when absent
  std::string payoff = "identity";
  double strike = 0.5;
  std::string weight_fn = "uniform";
  std::vector<double> x0{0.0};  // one value is repeated over all dimensions
  double x1 = 1.0;
  double x2 = 0.0;
  double mu = 0.05;
  double g_alpha = 0.2;
  double g_gamma = 0.3;
  std::optional<double> bump;  // default_bump when absent
  std::size_t dump_paths = 16;  // paths written in paths mode
  std::string out = "fbel_results.csv";

  /// Key names accept '-' or '_' ("weight-fn" = "weight_fn").
  void set(std::string_view key, std::string_view value);
  /// Lines of key=value; '#' starts a comment. Errors carry the line number.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);
  void merge_file(const std::string& path);
  void merge_text(std::string_view text);

  /// Every key with its effective value; epsilon and bump resolved.
  std::string resolved() const;
  std::vector<double> initial_state() const;
  double resolved_epsilon() const;
  std::string config_path() const { return out + ".resolved.cfg"; }
};

struct RunReport {
  std::vector<ResultRow> rows;
  std::vector<std::string> advisories;
  std::string results_path;
  std::string config_path;
  /// Failing comparisons make a run fail only in validate mode.
  bool failed = false;
};

/// Validity advisories for the singular-drift theory in dimension dim.
std::vector<std::string> validity_advisories(HurstParam h, std::size_t dim);

/// Runs the configured mode and writes the results CSV plus the resolved
/// configuration next to it.
RunReport run(const RunConfig& config);

}  // namespace fbel
