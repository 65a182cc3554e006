#pragma once

#include <array>
#include <cstdint>

namespace fbel {

/// Philox4x32-10 counter-based generator: a keyed bijection on 128-bit
/// counters, so any block of any stream is reachable without state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Identifies the random numbers of one Monte-Carlo path.
struct PathSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Disjoint sub-streams of one path.
enum class Stream : std::uint32_t {
  wiener = 0,      // increments of the Brownian motion generating B^H
  residual = 1,    // within-cell component of B^H independent of the increments
  stock = 2,       // W' driving the stock in the two-factor model
  cholesky = 3,    // reference sampler
};

/// Standard normal variates for (seed, stream), via Box-Muller on Philox output.
/// Results are a pure function of (master_seed, path_index, stream, position).
class NormalStream {
 public:
  NormalStream(PathSeed seed, Stream stream) noexcept;

  double next() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t path_;
  std::uint32_t block_ = 0;
  double cache_[2] = {0.0, 0.0};
  int cached_ = 0;
};

}  // namespace fbel
