#include "copsub/rng.hpp"

#include <cmath>
#include <numbers>

#include "copsub/special.hpp"

namespace copsub {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::Block RngStream::philox_block(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : seed_(seed), stream_(stream_index), key_{seed, stream_index} {}

RngStream RngStream::substream(std::uint64_t index) const noexcept {
  return RngStream(mix64(seed_ ^ mix64(stream_ + 0x632BE59BD9B4E019ULL)), index);
}

RngStream::result_type RngStream::operator()() noexcept {
  if (position_ == 4) {
    buffer_ = philox_block({counter_, 0, 0, 0}, key_);
    ++counter_;
    position_ = 0;
  }
  return buffer_[position_++];
}

double RngStream::uniform() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-and-reject.
  std::uint64_t x = (*this)();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::exponential() noexcept { return -std::log(uniform()); }

double RngStream::normal() noexcept { return normal_quantile(uniform()); }

double RngStream::gamma(double shape) noexcept {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::positive_stable(double alpha) noexcept {
  if (alpha >= 1.0) return 1.0;
  // Kanter's representation of the Chambers-Mallows-Stuck construction.
  const double u = std::numbers::pi * uniform();
  const double w = exponential();
  const double log_v = std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha +
                       (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * u)) - std::log(w));
  return std::exp(log_v);
}

}  // namespace copsub
