#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "copsub/estimators.hpp"
#include "copsub/resampling.hpp"
#include "copsub/rng.hpp"
#include "copsub/sample.hpp"

namespace copsub {

/// Trapezoid rule in x = ln s on [ln s_min, ln s_max], split at s = 1, with two
/// Richardson steps. The node count is doubled until the estimated error is
/// below `tolerance` or `max_nodes` is exceeded.
struct QuadratureConfig {
  double s_min = 1e-6;
  double s_max = 50.0;
  std::size_t nodes = 4000;
  std::size_t max_nodes = 256000;
  double tolerance = 1e-6;

  void validate() const;
};

using CopulaFunction = std::function<double(std::span<const double>)>;

/// Points of the simplex with coordinates in {0, 1/k, ..., 1}, each a full
/// d-vector (w_1, ..., w_d) summing to 1. d = 2, k = 20 gives 21 points.
std::vector<std::vector<double>> simplex_grid(std::size_t d, std::size_t k);

/// nu(f)(w) = exp(-gamma - int_0^inf {f(e^{-s w_1}, ..., e^{-s w_d}) - 1(s <= 1)} ds / s)
/// by quadrature; w is a full simplex point. Throws QuadratureNonconvergence.
double pickands_nu(const CopulaFunction& f, std::span<const double> w,
                   const QuadratureConfig& config = {});

/// nu of the empirical checkerboard copula, integrated exactly piece by piece
/// with exponential integrals.
double checkerboard_nu(const RankMatrix& ranks, std::span<const double> w);

/// nu of the checkerboard (exact) or beta (quadrature) estimator.
double pickands_nu(EstimatorKind kind, const RankMatrix& ranks, std::span<const double> w,
                   const QuadratureConfig& config = {});

struct PickandsCurve {
  std::vector<std::vector<double>> w_grid;
  std::vector<double> values;
  std::optional<double> band_radius;
  /// sup_w |replicate| for every subsample replicate behind the band.
  std::vector<double> replicate_sups;

  /// True when |values[k] - truth[k]| <= band_radius at every grid point.
  bool covers(std::span<const double> truth) const;
};

PickandsCurve pickands_estimate(EstimatorKind kind, const RankMatrix& ranks,
                                const std::vector<std::vector<double>>& w_grid,
                                const QuadratureConfig& config = {});

struct PickandsBandOptions {
  bool enumerate = false;
  std::size_t workers = 1;
  QuadratureConfig quadrature;
};

/// Estimate plus a uniform band of radius q(1 - alpha) / sqrt(n), q being the
/// empirical quantile of the sup-norms of the M subsample replicates
/// correction * sqrt(b) * (nu(C_b) - nu(C_n)).
PickandsCurve pickands_band(EstimatorKind kind, const Sample& sample,
                            const SubsampleScheme& scheme, std::size_t M,
                            const std::vector<std::vector<double>>& w_grid, double alpha,
                            const RngStream& rng, const PickandsBandOptions& options = {});

}  // namespace copsub
