#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "copsub/estimators.hpp"
#include "copsub/grid.hpp"
#include "copsub/resampling.hpp"
#include "copsub/rng.hpp"
#include "copsub/sample.hpp"

namespace copsub {

/// Interior evaluation points, one d-vector each.
using PointSet = std::vector<std::vector<double>>;

/// {(i/3, j/3) : i, j = 1, 2} in the order (1/3,1/3), (1/3,2/3), (2/3,1/3), (2/3,2/3).
PointSet thirds_point_set();

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class Functional { ks, cvm };

std::string_view to_string(Functional f);

/// max_p |values[p]|.
double ks_functional(std::span<const double> values);
double ks_functional(const GridEvaluation& values);
/// sum_p weight_p * values[p]^2.
double cvm_functional(std::span<const double> values, std::span<const double> weights);
double cvm_functional(const GridEvaluation& values);

/// The functional applied to every replicate row.
std::vector<double> functional_values(const ReplicateSet& set, Functional f);

/// d = 2: {i/10 : i = 1..9}^2; d = 4: {i/5 : i = 1..4}^4; otherwise {i/5 : i = 1..4}^d.
Grid default_grid(std::size_t d);

/// Grid holding exactly the given points (tensor form when they form one).
Grid grid_from_points(const PointSet& points);

/// Empirical covariance (divisor M) of the replicate columns at the points of P.
Matrix covariance_at_points(const ReplicateSet& set, const PointSet& points);

/// x_(k) with k = ceil(M p), the left-continuous generalized inverse of the ECDF.
double empirical_quantile(std::span<const double> values, double p);

struct QuantileEstimate {
  double level = 0.0;
  double value = 0.0;
  std::size_t M = 0;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// [psi - q(1 - alpha/2) / sqrt(n), psi - q(alpha/2) / sqrt(n)] from replicate functional values.
ConfidenceInterval basic_ci(double psi_hat, std::span<const double> replicate_psis, double alpha,
                            std::size_t n);

/// 12 * integral of the estimated copula - 3 (d = 2). The rank and ecdf kinds
/// use the exact rank formula; the others a 64 x 64 midpoint rule.
double spearman_rho(EstimatorKind kind, const Sample& sample);

/// Basic subsampling interval for Spearman's rho of the `kind` estimator.
ConfidenceInterval spearman_rho_ci(EstimatorKind kind, const Sample& sample,
                                   const SubsampleScheme& scheme, std::size_t M, double alpha,
                                   const RngStream& rng);

}  // namespace copsub
