#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fbel/frac_core.hpp"
#include "fbel/rng.hpp"

namespace fbel {

/// Payoff value of one simulated path started at x.
using ModelRunner = std::function<double(std::span<const double> x, PathSeed seed)>;

enum class FdPairing {
  /// Both bumped runs of a pair use the same seed.
  common,
  /// The down run uses an unrelated seed; reference for the pairing gain.
  independent,
};

struct FDEstimate {
  std::vector<double> value;
  std::vector<double> std_error;  // from the per-pair differences
  double bump = 0.0;
  std::size_t n_paths = 0;
  /// Rounding in the differences exceeds both the reported error and 1e-8 of the value.
  bool below_noise_floor = false;
  std::string note;
};

/// Central difference (runner(x + bump e_i) - runner(x - bump e_i)) / (2 bump)
/// averaged over paths, per coordinate.
FDEstimate fd_delta(const ModelRunner& runner, std::span<const double> x, double bump, std::size_t n_paths,
                    std::uint64_t master_seed, FdPairing pairing = FdPairing::common);

/// 1e-2 max(1, |x|) for smooth payoffs, 5e-2 for digitals.
double default_bump(double x, bool digital);

/// d/dx P(x + B^H_T > K) = phi((K - x) / T^H) / T^H.
double gaussian_digital_delta(double x, double strike, double horizon, HurstParam h);

}  // namespace fbel
