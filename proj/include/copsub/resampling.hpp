#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "copsub/estimators.hpp"
#include "copsub/grid.hpp"
#include "copsub/rng.hpp"
#include "copsub/sample.hpp"

namespace copsub {

enum class SubsampleMode { iid_without_replacement, consecutive_blocks };

std::string_view to_string(SubsampleMode mode);

/// C(n, k) when it fits in 64 bits, otherwise nullopt.
std::optional<std::uint64_t> binomial_coefficient(std::uint64_t n, std::uint64_t k);

/// How size-b subsamples of an n-sample are formed.
struct SubsampleScheme {
  SubsampleMode mode = SubsampleMode::iid_without_replacement;
  std::size_t n = 0;
  std::size_t b = 0;
  bool fpc = true;

  /// fpc defaults to on.
  static SubsampleScheme iid(std::size_t n, std::size_t b, std::optional<bool> fpc = std::nullopt);
  /// fpc defaults to off.
  static SubsampleScheme blocks(std::size_t n, std::size_t b,
                                std::optional<bool> fpc = std::nullopt);

  void validate() const;
  /// Number of distinct subsamples: C(n, b) (nullopt if it overflows 64 bits) or n - b + 1.
  std::optional<std::uint64_t> total() const;
  /// (1 - b/n)^{-1/2} with fpc, otherwise 1.
  double correction() const;
};

/// Random subsample: b distinct sorted 0-based indices (iid mode) or a
/// uniformly chosen block (block mode).
std::vector<std::size_t> draw_subsample_indices(const SubsampleScheme& scheme, RngStream& rng);
/// Every distinct subsample of the scheme: size-b subsets in lexicographic
/// order (iid mode) or blocks 1..n-b+1 (block mode). Throws when there are
/// more than `limit`.
std::vector<std::vector<std::size_t>> enumerate_subsamples(const SubsampleScheme& scheme,
                                                           std::uint64_t limit = 10'000'000);
/// Rows of block m (1-based, m in [1, n - b + 1]) as 0-based indices m-1, ..., m+b-2.
std::vector<std::size_t> block_indices(const SubsampleScheme& scheme, std::size_t m);

/// correction * sqrt(b) * (estimator(subsample) - center) at every grid point.
/// Ranks are recomputed within the subsample.
std::vector<double> subsample_replicate(EstimatorKind kind, const Sample& sample,
                                        std::span<const std::size_t> indices,
                                        const GridEvaluation& center, const Grid& grid,
                                        const SubsampleScheme& scheme);

enum class ResamplingMethod { subsampling, empirical_bootstrap, b_out_of_n, multiplier };

std::string_view to_string(ResamplingMethod method);
/// Accepts the enumerator names plus the short tags sub, boot, bOutOfN, mult.
ResamplingMethod parse_resampling_method(std::string_view name);

/// M replicate rows of a process on a common grid (row-major, M x grid size).
struct ReplicateSet {
  GridPtr grid;
  std::size_t M = 0;
  std::vector<double> values;
  ResamplingMethod method = ResamplingMethod::subsampling;
  std::optional<SubsampleScheme> scheme;
  EstimatorKind kind = EstimatorKind::rank;
  bool centered = false;

  std::size_t points() const noexcept { return grid ? grid->size() : 0; }
  std::span<const double> row(std::size_t m) const noexcept {
    return {values.data() + m * points(), points()};
  }
  double at(std::size_t m, std::size_t p) const noexcept { return values[m * points() + p]; }
  /// Column p across all rows.
  std::vector<double> column(std::size_t p) const;
};

/// Subtracts the column mean from every column.
void center_rows(ReplicateSet& set);

struct ReplicateOptions {
  bool center_replicates = false;
  /// Use every distinct subsample once, in lexicographic (iid) or block order; M is ignored.
  bool enumerate = false;
  std::size_t workers = 1;
};

/// Subsampling replicates of the `kind` process. Row m uses rng.substream(m)
/// in stochastic mode, so the result does not depend on the worker count.
ReplicateSet build_replicate_set(EstimatorKind kind, const Sample& sample,
                                 const SubsampleScheme& scheme, std::size_t M,
                                 const GridPtr& grid, const RngStream& rng,
                                 const ReplicateOptions& options = {});

/// sqrt(n) * (ecdf(resample) - center); resample drawn with replacement.
std::vector<double> empirical_bootstrap_replicate(const Sample& sample, RngStream& rng,
                                                  const Grid& grid, const GridEvaluation& center);
std::vector<double> empirical_bootstrap_replicate(const Sample& sample,
                                                  std::span<const std::size_t> indices,
                                                  const Grid& grid, const GridEvaluation& center);

/// sqrt(b) * (ecdf(resample of size b) - center); 2 <= b <= n.
std::vector<double> b_out_of_n_replicate(const Sample& sample, std::size_t b, RngStream& rng,
                                         const Grid& grid, const GridEvaluation& center);
std::vector<double> b_out_of_n_replicate(const Sample& sample,
                                         std::span<const std::size_t> indices, const Grid& grid,
                                         const GridEvaluation& center);

struct MultiplierConfig {
  /// Finite-difference bandwidth; 0 selects n^{-1/2}.
  double bandwidth = 0.0;

  double resolve(std::size_t n) const;
  void validate(std::size_t n) const;
};

/// Multiplier bootstrap with standard normal multipliers and finite-difference
/// partial derivatives of the empirical copula. Everything not depending on the
/// multipliers is precomputed, so each replicate costs O(n d + grid size).
class MultiplierBootstrap {
 public:
  MultiplierBootstrap(const Sample& sample, GridPtr grid, MultiplierConfig config = {});

  std::vector<double> replicate(std::span<const double> multipliers) const;
  std::vector<double> replicate(RngStream& rng) const;

  /// Partial derivative estimates, grid size x d, each in [0, 1].
  const std::vector<double>& derivatives() const noexcept { return derivatives_; }
  const std::vector<double>& copula_values() const noexcept { return copula_; }
  std::size_t n() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::size_t d_;
  GridPtr grid_;
  RankMatrix ranks_;
  std::vector<double> copula_;
  std::vector<double> derivatives_;
  std::vector<std::vector<std::int32_t>> point_thresholds_;  // per point, per dim
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> dims_;
};

std::vector<double> multiplier_replicate(const Sample& sample, const MultiplierConfig& config,
                                         RngStream& rng, const GridPtr& grid);

/// M replicates of a bootstrap method (empirical_bootstrap, b_out_of_n with
/// resample size b, or multiplier); row m uses rng.substream(m).
ReplicateSet build_bootstrap_set(ResamplingMethod method, const Sample& sample, std::size_t M,
                                 const GridPtr& grid, const RngStream& rng,
                                 bool center_replicates, std::size_t b = 0,
                                 std::size_t workers = 1);

}  // namespace copsub
