#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace copsub {

/// A finite evaluation set in [0,1]^d with nonnegative weights.
///
/// Grids built with `tensor` remember their axes, which lets the estimators
/// evaluate a whole grid by cumulative counting instead of point by point.
/// Points of a tensor grid are ordered with the last coordinate varying
/// fastest, so the 2 x 2 grid on {1/3, 2/3} lists (1/3,1/3), (1/3,2/3),
/// (2/3,1/3), (2/3,2/3).
class Grid {
 public:
  Grid() = default;
  /// Arbitrary points (flattened row-major, d per point). Empty weights means uniform.
  Grid(std::size_t d, std::vector<double> points, std::vector<double> weights = {});

  /// Cartesian product of one axis per dimension, uniform weights.
  static Grid tensor(std::vector<std::vector<double>> axes);
  /// {1/(k+1), ..., k/(k+1)}^d with uniform weights 1/k^d.
  static Grid uniform_interior(std::size_t d, std::size_t k);

  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return d_ == 0 ? 0 : points_.size() / d_; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> point(std::size_t p) const noexcept {
    return {points_.data() + p * d_, d_};
  }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }

  bool is_tensor() const noexcept { return axes_.has_value(); }
  const std::vector<std::vector<double>>& axes() const { return axes_.value(); }

  /// Index of the point equal to `u` (coordinatewise within tol), if present.
  std::optional<std::size_t> find(std::span<const double> u, double tol = 1e-12) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.d_ == b.d_ && a.points_ == b.points_ && a.weights_ == b.weights_;
  }

 private:
  std::size_t d_ = 0;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::optional<std::vector<std::vector<double>>> axes_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// One real value per point of a grid.
struct GridEvaluation {
  GridPtr grid;
  std::vector<double> values;

  GridEvaluation() = default;
  GridEvaluation(GridPtr g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
};

/// Throws GridMismatch unless both grids hold the same points.
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace copsub
