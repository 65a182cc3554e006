#include "fbel/rng.hpp"

#include <cmath>
#include <numbers>

namespace fbel {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Uniform in (0, 1) from 53 random bits, never 0 so log() is safe.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

NormalStream::NormalStream(PathSeed seed, Stream stream) noexcept
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      stream_(static_cast<std::uint32_t>(stream)),
      path_(seed.path_index) {}

void NormalStream::refill() noexcept {
  // counter = (block, stream, path lo, path hi)
  const auto r = philox4x32({block_++, stream_, static_cast<std::uint32_t>(path_),
                             static_cast<std::uint32_t>(path_ >> 32)},
                            key_);
  const double u1 = to_open_unit((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
  const double u2 = to_open_unit((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cache_[0] = radius * std::cos(angle);
  cache_[1] = radius * std::sin(angle);
  cached_ = 2;
}

double NormalStream::next() noexcept {
  if (cached_ == 0) refill();
  return cache_[2 - cached_--];
}

}  // namespace fbel
