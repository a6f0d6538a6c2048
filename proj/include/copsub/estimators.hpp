#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "copsub/grid.hpp"
#include "copsub/sample.hpp"

namespace copsub {

enum class EstimatorKind {
  deheuvels,     // plug-in C_n = F_n(F_n1^-(u_1), ..., F_nd^-(u_d))
  ecdf,          // (1/n) sum_i prod_j 1{F_nj(X_ij) <= u_j}; defined with ties
  rank,          // empirical d.f. of R_i / n; tie-free only
  checkerboard,  // multilinear extension of the rank copula; tie-free only
  beta,          // empirical beta copula; tie-free only
};

std::string_view to_string(EstimatorKind kind);
/// Accepts the enumerator names plus "hat" (rank), "tilde" (ecdf), "hash" (checkerboard).
EstimatorKind parse_estimator_kind(std::string_view name);
bool requires_tie_free(EstimatorKind kind) noexcept;

// Pointwise evaluation. `u` must have one coordinate per column, each in [0,1].
double deheuvels_copula(const Sample& sample, std::span<const double> u);
double ecdf_copula(const Sample& sample, std::span<const double> u);
double rank_copula(const RankMatrix& ranks, std::span<const double> u);
double checkerboard_copula(const RankMatrix& ranks, std::span<const double> u);
double beta_copula(const RankMatrix& ranks, std::span<const double> u);

/// g(u) = min_j { u_j ^ max_{k != j} (1 - u_k) }.
double weight_g(std::span<const double> u);

/// Estimator values at every grid point. Tensor grids use cumulative counting
/// (rank, ecdf, deheuvels) or per-axis factor tables (checkerboard, beta).
std::vector<double> evaluate(EstimatorKind kind, const RankMatrix& ranks, const Grid& grid);
std::vector<double> evaluate(EstimatorKind kind, const Sample& sample, const Grid& grid);

struct WeightedEvalConfig {
  double omega = 0.0;  // in [0, 1/2)
  double c = 0.5;      // in (0, 1)
  /// Zero out points with g(u) < c / n, n being the size of the evaluated sample.
  bool restrict_to_support = false;

  void validate() const;
};

/// scale * (estimator(data, p) - reference[p]) at every grid point, optionally
/// divided by g(p)^omega. Wherever g vanishes the weighted value is 0.
GridEvaluation process_on_grid(EstimatorKind kind, const Sample& data,
                               const GridEvaluation& reference, double scale,
                               const GridPtr& grid,
                               const std::optional<WeightedEvalConfig>& weighting = std::nullopt);

/// In-place weighting of process values on `grid` for a sample of size n.
void apply_weighting(std::span<double> values, const Grid& grid, const WeightedEvalConfig& cfg,
                     std::size_t n);

}  // namespace copsub
