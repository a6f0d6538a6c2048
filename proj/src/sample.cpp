#include "copsub/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "copsub/errors.hpp"

namespace copsub {

Sample::Sample(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n_ < 1) throw InvalidArgument("sample needs at least one row");
  if (d_ < 2) throw InvalidArgument("sample dimension must be at least 2");
  if (values_.size() != n_ * d_) {
    throw InvalidArgument("sample shape mismatch: expected " + std::to_string(n_ * d_) +
                          " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw InvalidArgument("non-finite value at row " + std::to_string(k / d_ + 1) +
                            ", column " + std::to_string(k % d_ + 1));
    }
  }
}

std::vector<double> Sample::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = values_[i * d_ + j];
  return out;
}

Sample Sample::subset(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * d_);
  for (std::size_t idx : indices) {
    if (idx >= n_) throw IndexOutOfRange("row index " + std::to_string(idx) + " out of range");
    auto r = row(idx);
    out.insert(out.end(), r.begin(), r.end());
  }
  Sample s;
  s.n_ = indices.size();
  s.d_ = d_;
  s.values_ = std::move(out);
  return s;
}

Sample Sample::block(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > n_) throw IndexOutOfRange("block out of range");
  Sample s;
  s.n_ = count;
  s.d_ = d_;
  s.values_.assign(values_.begin() + static_cast<std::ptrdiff_t>(first * d_),
                   values_.begin() + static_cast<std::ptrdiff_t>((first + count) * d_));
  return s;
}

RankMatrix::RankMatrix(std::size_t n, std::size_t d, std::vector<std::int32_t> ranks,
                       std::vector<bool> has_ties)
    : n_(n), d_(d), ranks_(std::move(ranks)), has_ties_(std::move(has_ties)) {
  if (ranks_.size() != n_ * d_ || has_ties_.size() != d_) {
    throw InvalidArgument("rank matrix shape mismatch");
  }
}

bool RankMatrix::any_ties() const noexcept {
  return std::any_of(has_ties_.begin(), has_ties_.end(), [](bool t) { return t; });
}

void RankMatrix::require_tie_free() const {
  for (std::size_t j = 0; j < d_; ++j) {
    if (has_ties_[j]) throw TiesPresent(j);
  }
}

RankMatrix compute_ranks(const Sample& sample) {
  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  std::vector<std::int32_t> ranks(n * d);
  std::vector<bool> ties(d, false);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sample(a, j) < sample(b, j); });
    // Walk groups of equal values; every member gets the group's last position.
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && sample(order[end], j) == sample(order[start], j)) ++end;
      if (end - start > 1) ties[j] = true;
      for (std::size_t k = start; k < end; ++k) {
        ranks[order[k] * d + j] = static_cast<std::int32_t>(end);
      }
      start = end;
    }
  }
  return RankMatrix(n, d, std::move(ranks), std::move(ties));
}

}  // namespace copsub
