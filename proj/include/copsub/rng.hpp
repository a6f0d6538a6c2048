#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace copsub {

/// Counter-based random stream (Philox4x64-10).
///
/// The Philox key is (seed, stream index), the counter is the block number, so
/// every (seed, stream) pair is an independent, reproducible sequence and no
/// state is shared between streams. `substream(k)` derives a child stream for
/// nested parallel work (e.g. replicate k of Monte Carlo repetition r).
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }
  RngStream substream(std::uint64_t index) const noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  double exponential() noexcept;
  /// Standard normal by inversion.
  double normal() noexcept;
  /// Gamma(shape, 1), Marsaglia-Tsang with the shape < 1 boost.
  double gamma(double shape) noexcept;
  /// Positive alpha-stable variable with Laplace transform exp(-s^alpha), alpha in (0, 1].
  double positive_stable(double alpha) noexcept;

  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;
  static Block philox_block(Block counter, Key key) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  Key key_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  unsigned position_ = 4;
};

/// SplitMix64 finalizer; used to derive keys.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace copsub
