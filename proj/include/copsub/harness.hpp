#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "copsub/estimators.hpp"
#include "copsub/grid.hpp"
#include "copsub/inference.hpp"
#include "copsub/resampling.hpp"
#include "copsub/sampling.hpp"

namespace copsub {

enum class Experiment { cov_at_points, ks_cvm_quantiles, timeseries_sweep, pickands_band };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::cov_at_points;
  CopulaSpec copula = CopulaSpec::make(Family::clayton, 0.33, 2);
  /// AR(1) coefficient for the time-series sweep.
  double beta = 0.0;
  std::size_t n = 100;
  /// Subsample sizes; empty selects default_b.
  std::vector<std::size_t> b_values;
  std::size_t M = 500;
  std::size_t mc_reps = 300;
  std::size_t target_reps = 20000;
  std::vector<ResamplingMethod> methods{ResamplingMethod::subsampling};
  /// Unset: rank for the process experiments, checkerboard for Pickands.
  std::optional<EstimatorKind> kind;
  /// Unset: on for iid subsampling, off for blocks.
  std::optional<bool> fpc;
  /// Unset: off for covariance, on for quantiles.
  std::optional<bool> center;
  std::uint64_t seed = 20240601;
  /// 0 selects the default grid; otherwise the k^d interior grid.
  std::size_t grid_k = 0;
  PointSet points = thirds_point_set();
  double alpha = 0.1;
  /// Simplex grid resolution for Pickands (d = 2: k + 1 points).
  std::size_t simplex_k = 20;
  /// Add the iid-mode comparison to the time-series sweep.
  bool iid_comparison = true;
  /// Length of the series used to estimate the stationary copula when beta > 0.
  std::size_t truth_series_length = 4'000'000;
  /// Threads; 0 = one per hardware thread. Results do not depend on it.
  std::size_t workers = 0;

  void validate() const;
  EstimatorKind resolved_kind() const;
  bool resolved_center() const;
  std::vector<std::size_t> resolved_b() const;
  Grid resolved_grid() const;
  /// key = value pairs describing every field.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// floor(0.28 n) for CvM and general use, floor(0.1 n) for KS, at least 2.
std::size_t default_b(std::size_t n, Functional functional = Functional::cvm);

/// One long-format record: which method, at which point or level, which statistic.
struct ReportRow {
  std::string method;
  std::string point;
  std::string statistic;
  double value = 0.0;
};

struct ReportTable {
  std::string name;
  std::vector<ReportRow> rows;
};

struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ReportTable> tables;
  double runtime_seconds = 0.0;

  const ReportTable& table(std::string_view name) const;
  /// Throws InvalidArgument when no row matches.
  double value(std::string_view table, std::string_view method, std::string_view point,
               std::string_view statistic) const;
};

/// Quantities the resampling estimates are compared with.
struct Targets {
  std::vector<std::string> points;
  std::vector<std::string> statistics;
  std::vector<double> values;
};

/// Covariance (at the config points) or KS/CvM quantiles of sqrt(n)(C_n - C),
/// estimated from config.target_reps independent samples or series.
Targets run_ground_truth(const ExperimentConfig& config);

/// Means and MSEs (x 10^4) of the resampling estimates of the targets.
ExperimentReport run_method_comparison(const ExperimentConfig& config,
                                       const std::optional<Targets>& targets = std::nullopt);

/// Block-subsampling quantile MSEs for every b (plus iid mode when requested).
ExperimentReport run_timeseries_sweep(const ExperimentConfig& config,
                                      const std::optional<Targets>& targets = std::nullopt);

/// Coverage of the uniform subsampling band for the Pickands function.
ExperimentReport run_pickands_coverage(const ExperimentConfig& config);

/// Dispatches on config.experiment.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Report table holding the targets.
ReportTable targets_table(const Targets& targets);

}  // namespace copsub
