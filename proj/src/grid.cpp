#include "copsub/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copsub/errors.hpp"

namespace copsub {

Grid::Grid(std::size_t d, std::vector<double> points, std::vector<double> weights)
    : d_(d), points_(std::move(points)), weights_(std::move(weights)) {
  if (d_ < 1) throw InvalidArgument("grid dimension must be positive");
  if (points_.size() % d_ != 0) throw InvalidArgument("grid points are not a multiple of d");
  for (double x : points_) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("grid coordinate outside [0,1]");
  }
  const std::size_t m = points_.size() / d_;
  if (weights_.empty()) {
    weights_.assign(m, m == 0 ? 0.0 : 1.0 / static_cast<double>(m));
  } else if (weights_.size() != m) {
    throw InvalidArgument("grid weights length " + std::to_string(weights_.size()) +
                          " does not match " + std::to_string(m) + " points");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidArgument("grid weights must be nonnegative");
  }
}

Grid Grid::tensor(std::vector<std::vector<double>> axes) {
  const std::size_t d = axes.size();
  if (d < 1) throw InvalidArgument("tensor grid needs at least one axis");
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.empty()) throw InvalidArgument("tensor grid axis is empty");
    for (std::size_t t = 1; t < a.size(); ++t) {
      if (!(a[t - 1] < a[t])) throw InvalidArgument("tensor grid axes must be increasing");
    }
    total *= a.size();
  }
  std::vector<double> pts;
  pts.reserve(total * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t j = 0; j < d; ++j) pts.push_back(axes[j][idx[j]]);
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
    }
  }
  Grid g(d, std::move(pts));
  g.axes_ = std::move(axes);
  return g;
}

Grid Grid::uniform_interior(std::size_t d, std::size_t k) {
  if (k < 1) throw InvalidArgument("grid needs at least one point per axis");
  std::vector<double> axis(k);
  for (std::size_t i = 0; i < k; ++i) {
    axis[i] = static_cast<double>(i + 1) / static_cast<double>(k + 1);
  }
  return tensor(std::vector<std::vector<double>>(d, axis));
}

std::optional<std::size_t> Grid::find(std::span<const double> u, double tol) const {
  if (u.size() != d_) return std::nullopt;
  for (std::size_t p = 0; p < size(); ++p) {
    auto q = point(p);
    bool same = true;
    for (std::size_t j = 0; j < d_ && same; ++j) same = std::abs(q[j] - u[j]) <= tol;
    if (same) return p;
  }
  return std::nullopt;
}

GridEvaluation::GridEvaluation(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw InvalidArgument("grid evaluation without a grid");
  if (values.size() != grid->size()) {
    throw GridMismatch("evaluation has " + std::to_string(values.size()) + " values for " +
                       std::to_string(grid->size()) + " grid points");
  }
  for (double x : values) {
    if (std::isnan(x)) throw InvalidArgument("NaN in grid evaluation");
  }
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a == &b) return;
  if (a.d() != b.d() || a.size() != b.size() || !std::equal(a.points().begin(), a.points().end(),
                                                           b.points().begin())) {
    throw GridMismatch("evaluations refer to different grids");
  }
}

}  // namespace copsub
