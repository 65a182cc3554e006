#include "fbel/fd_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fbel/error.hpp"
#include "fbel/parallel.hpp"

namespace fbel {

FDEstimate fd_delta(const ModelRunner& runner, std::span<const double> x, double bump, std::size_t n_paths,
                    std::uint64_t master_seed, FdPairing pairing) {
  if (!(bump > 0.0) || !std::isfinite(bump)) throw InvalidArgument("fd_delta: bump must be positive");
  if (n_paths < 2) throw InvalidArgument("fd_delta needs at least two paths");
  if (!runner) throw InvalidArgument("fd_delta: empty model runner");
  const std::size_t d = x.size();
  if (d == 0) throw InvalidArgument("fd_delta: empty state");

  // The unpaired run draws from a disjoint block of path indices.
  const std::uint64_t down_offset = pairing == FdPairing::common ? 0 : (std::uint64_t{1} << 62);
  std::vector<double> diffs(d * n_paths);
  std::vector<double> scale(d * n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    std::vector<double> xb(x.begin(), x.end());
    for (std::size_t i = 0; i < d; ++i) {
      xb[i] = x[i] + bump;
      const double up = runner(xb, PathSeed{master_seed, p});
      xb[i] = x[i] - bump;
      const double down = runner(xb, PathSeed{master_seed, p + down_offset});
      xb[i] = x[i];
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericalError("fd_delta: model runner returned a non-finite value on path " + std::to_string(p));
      }
      diffs[i * n_paths + p] = (up - down) / (2.0 * bump);
      scale[i * n_paths + p] = std::max(std::abs(up), std::abs(down));
    }
  });

  FDEstimate out;
  out.bump = bump;
  out.n_paths = n_paths;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < d; ++i) {
    const auto ms = mean_stderr(std::span<const double>(&diffs[i * n_paths], n_paths));
    out.value.push_back(ms.mean);
    out.std_error.push_back(ms.std_error);
    double max_scale = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) max_scale = std::max(max_scale, scale[i * n_paths + p]);
    // Rounding error of one difference quotient, plus the rounding of x +- bump itself.
    const double rounding = eps * (max_scale + std::abs(x[i])) / bump;
    // Deterministic differences (linear payoffs) have no noise; compare with the value instead.
    const double reference = std::max(ms.std_error, 1e-8 * std::max(1.0, std::abs(ms.mean)));
    if (rounding > reference) {
      out.below_noise_floor = true;
      std::ostringstream os;
      os << "component " << i << ": bump " << bump << " leaves differences at rounding level (" << rounding
         << " vs " << reference << ")";
      out.note += (out.note.empty() ? "" : "; ") + os.str();
    }
  }
  return out;
}

double default_bump(double x, bool digital) {
  return digital ? 5e-2 : 1e-2 * std::max(1.0, std::abs(x));
}

double gaussian_digital_delta(double x, double strike, double horizon, HurstParam h) {
  if (!(horizon > 0.0)) throw InvalidArgument("gaussian_digital_delta: horizon must be positive");
  const double sd = std::pow(horizon, h.value());
  const double z = (strike - x) / sd;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sd);
}

}  // namespace fbel
