#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace copsub {

/// An n x d matrix of finite observations stored row-major; n >= 1, d >= 2.
class Sample {
 public:
  Sample() = default;
  Sample(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * d_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * d_, d_};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double> column(std::size_t j) const;

  /// Rows at the given (0-based) indices, in the given order; repeats allowed.
  Sample subset(std::span<const std::size_t> indices) const;

  /// Consecutive rows [first, first + count).
  Sample block(std::size_t first, std::size_t count) const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
};

/// Per-column ranks R_ij = n * F_nj(X_ij). Tied values share the maximal rank.
class RankMatrix {
 public:
  RankMatrix() = default;
  RankMatrix(std::size_t n, std::size_t d, std::vector<std::int32_t> ranks,
             std::vector<bool> has_ties);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::int32_t operator()(std::size_t i, std::size_t j) const noexcept {
    return ranks_[i * d_ + j];
  }
  std::span<const std::int32_t> row(std::size_t i) const noexcept {
    return {ranks_.data() + i * d_, d_};
  }
  std::span<const std::int32_t> ranks() const noexcept { return ranks_; }
  bool has_ties(std::size_t j) const { return has_ties_.at(j); }
  bool any_ties() const noexcept;

  /// Throws TiesPresent naming the first tied column.
  void require_tie_free() const;

  friend bool operator==(const RankMatrix&, const RankMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<std::int32_t> ranks_;
  std::vector<bool> has_ties_;
};

RankMatrix compute_ranks(const Sample& sample);

}  // namespace copsub
