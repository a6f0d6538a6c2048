#include "copsub/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "copsub/errors.hpp"
#include "copsub/special.hpp"
#include "lattice.hpp"

namespace copsub {

namespace {

void check_point(std::size_t d, std::span<const double> u) {
  if (u.size() != d) {
    throw InvalidArgument("point has " + std::to_string(u.size()) + " coordinates, expected " +
                          std::to_string(d));
  }
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("point coordinate outside [0,1]");
  }
}

// Minimal ranks #{l : X_lj < X_ij} + 1 recovered from maximal ranks: the
// multiplicity of a value equals the number of entries sharing its maximal rank.
std::vector<std::int32_t> minimal_ranks(const RankMatrix& ranks) {
  const std::size_t n = ranks.n();
  const std::size_t d = ranks.d();
  std::vector<std::int32_t> out(ranks.ranks().begin(), ranks.ranks().end());
  std::vector<std::int32_t> mult(n + 1);
  for (std::size_t j = 0; j < d; ++j) {
    if (!ranks.has_ties(j)) continue;
    std::fill(mult.begin(), mult.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++mult[static_cast<std::size_t>(ranks(i, j))];
    for (std::size_t i = 0; i < n; ++i) {
      out[i * d + j] = ranks(i, j) - mult[static_cast<std::size_t>(ranks(i, j))] + 1;
    }
  }
  return out;
}

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

std::vector<double> lattice_counts(std::span<const std::int32_t> keys, std::size_t n,
                                   std::size_t d,
                                   const std::vector<std::vector<std::int32_t>>& thresholds) {
  std::vector<std::size_t> dims(d);
  for (std::size_t j = 0; j < d; ++j) dims[j] = thresholds[j].size();
  const auto cells = detail::lattice_cells(keys, n, d, thresholds);
  std::vector<double> out = detail::weighted_lattice_sums(cells, {}, dims);
  for (double& h : out) h /= static_cast<double>(n);
  return out;
}

std::vector<double> evaluate_counting(EstimatorKind kind, const RankMatrix& ranks,
                                      const Grid& grid) {
  const std::size_t n = ranks.n();
  const std::size_t d = ranks.d();
  const bool deh = kind == EstimatorKind::deheuvels;
  std::vector<std::int32_t> keys =
      deh ? minimal_ranks(ranks) : std::vector<std::int32_t>(ranks.ranks().begin(), ranks.ranks().end());

  if (grid.is_tensor()) {
    std::vector<std::vector<std::int32_t>> th(d);
    for (std::size_t j = 0; j < d; ++j) {
      for (double a : grid.axes()[j]) th[j].push_back(deh ? detail::quantile_index(a, n) : detail::rank_threshold(a, n));
    }
    return lattice_counts(keys, n, d, th);
  }

  std::vector<double> out(grid.size());
  std::vector<std::int32_t> th(d);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    auto u = grid.point(p);
    for (std::size_t j = 0; j < d; ++j) th[j] = deh ? detail::quantile_index(u[j], n) : detail::rank_threshold(u[j], n);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool in = true;
      for (std::size_t j = 0; j < d && in; ++j) in = keys[i * d + j] <= th[j];
      count += in ? 1 : 0;
    }
    out[p] = static_cast<double>(count) / static_cast<double>(n);
  }
  return out;
}

// Per-axis factor tables: factor[j][t][i] = h_j(a_jt, R_ij); the estimator is
// (1/n) sum_i prod_j factor.
template <class Factor>
std::vector<double> evaluate_product_kernel(const RankMatrix& ranks, const Grid& grid,
                                            Factor&& factor_column) {
  const std::size_t n = ranks.n();
  const std::size_t d = ranks.d();
  std::vector<double> out(grid.size());
  if (grid.is_tensor()) {
    const auto& axes = grid.axes();
    std::vector<std::vector<std::vector<double>>> table(d);
    for (std::size_t j = 0; j < d; ++j) {
      for (double a : axes[j]) table[j].push_back(factor_column(j, a));
    }
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < d && prod != 0.0; ++j) prod *= table[j][idx[j]][i];
        sum += prod;
      }
      out[p] = sum / static_cast<double>(n);
      for (std::size_t j = d; j-- > 0;) {
        if (++idx[j] < axes[j].size()) break;
        idx[j] = 0;
      }
    }
    return out;
  }
  std::vector<std::vector<double>> cols(d);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    auto u = grid.point(p);
    for (std::size_t j = 0; j < d; ++j) cols[j] = factor_column(j, u[j]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d && prod != 0.0; ++j) prod *= cols[j][i];
      sum += prod;
    }
    out[p] = sum / static_cast<double>(n);
  }
  return out;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::deheuvels: return "deheuvels";
    case EstimatorKind::ecdf: return "ecdf";
    case EstimatorKind::rank: return "rank";
    case EstimatorKind::checkerboard: return "checkerboard";
    case EstimatorKind::beta: return "beta";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "deheuvels") return EstimatorKind::deheuvels;
  if (name == "ecdf" || name == "tilde") return EstimatorKind::ecdf;
  if (name == "rank" || name == "hat") return EstimatorKind::rank;
  if (name == "checkerboard" || name == "hash") return EstimatorKind::checkerboard;
  if (name == "beta") return EstimatorKind::beta;
  throw InvalidArgument("unknown estimator kind '" + std::string(name) + "'");
}

bool requires_tie_free(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::rank || kind == EstimatorKind::checkerboard ||
         kind == EstimatorKind::beta;
}

double deheuvels_copula(const Sample& sample, std::span<const double> u) {
  check_point(sample.d(), u);
  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  std::vector<double> thresholds(d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::int32_t k = detail::quantile_index(u[j], n);
    if (k == 0) return 0.0;
    std::vector<double> col = sample.column(j);
    std::nth_element(col.begin(), col.begin() + (k - 1), col.end());
    thresholds[j] = col[static_cast<std::size_t>(k - 1)];
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool in = true;
    for (std::size_t j = 0; j < d && in; ++j) in = sample(i, j) <= thresholds[j];
    count += in ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

double ecdf_copula(const Sample& sample, std::span<const double> u) {
  check_point(sample.d(), u);
  const RankMatrix ranks = compute_ranks(sample);
  const std::size_t n = ranks.n();
  const double nd = static_cast<double>(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool in = true;
    for (std::size_t j = 0; j < ranks.d() && in; ++j) in = ranks(i, j) / nd <= u[j];
    count += in ? 1 : 0;
  }
  return static_cast<double>(count) / nd;
}

double rank_copula(const RankMatrix& ranks, std::span<const double> u) {
  ranks.require_tie_free();
  check_point(ranks.d(), u);
  const double nd = static_cast<double>(ranks.n());
  std::size_t count = 0;
  for (std::size_t i = 0; i < ranks.n(); ++i) {
    bool in = true;
    for (std::size_t j = 0; j < ranks.d() && in; ++j) in = ranks(i, j) / nd <= u[j];
    count += in ? 1 : 0;
  }
  return static_cast<double>(count) / nd;
}

double checkerboard_copula(const RankMatrix& ranks, std::span<const double> u) {
  ranks.require_tie_free();
  check_point(ranks.d(), u);
  const double nd = static_cast<double>(ranks.n());
  double sum = 0.0;
  for (std::size_t i = 0; i < ranks.n(); ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < ranks.d() && prod != 0.0; ++j) {
      prod *= clamp01(nd * u[j] - ranks(i, j) + 1.0);
    }
    sum += prod;
  }
  return sum / nd;
}

double beta_copula(const RankMatrix& ranks, std::span<const double> u) {
  ranks.require_tie_free();
  check_point(ranks.d(), u);
  const int n = static_cast<int>(ranks.n());
  std::vector<std::vector<double>> tails(ranks.d());
  for (std::size_t j = 0; j < ranks.d(); ++j) binomial_upper_tails(n, u[j], tails[j]);
  double sum = 0.0;
  for (std::size_t i = 0; i < ranks.n(); ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < ranks.d(); ++j) prod *= tails[j][static_cast<std::size_t>(ranks(i, j))];
    sum += prod;
  }
  return sum / n;
}

double weight_g(std::span<const double> u) {
  const std::size_t d = u.size();
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d; ++j) {
    double other = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) other = std::max(other, 1.0 - u[k]);
    }
    g = std::min(g, std::min(u[j], other));
  }
  return g;
}

std::vector<double> evaluate(EstimatorKind kind, const RankMatrix& ranks, const Grid& grid) {
  if (grid.d() != ranks.d()) throw GridMismatch("grid dimension differs from data dimension");
  if (requires_tie_free(kind)) ranks.require_tie_free();
  const double nd = static_cast<double>(ranks.n());
  switch (kind) {
    case EstimatorKind::deheuvels:
    case EstimatorKind::ecdf:
    case EstimatorKind::rank:
      return evaluate_counting(kind, ranks, grid);
    case EstimatorKind::checkerboard:
      return evaluate_product_kernel(ranks, grid, [&](std::size_t j, double a) {
        std::vector<double> col(ranks.n());
        for (std::size_t i = 0; i < ranks.n(); ++i) col[i] = clamp01(nd * a - ranks(i, j) + 1.0);
        return col;
      });
    case EstimatorKind::beta: {
      std::vector<double> tails;
      return evaluate_product_kernel(ranks, grid, [&](std::size_t j, double a) {
        binomial_upper_tails(static_cast<int>(ranks.n()), a, tails);
        std::vector<double> col(ranks.n());
        for (std::size_t i = 0; i < ranks.n(); ++i) col[i] = tails[static_cast<std::size_t>(ranks(i, j))];
        return col;
      });
    }
  }
  throw InvalidArgument("unknown estimator kind");
}

std::vector<double> evaluate(EstimatorKind kind, const Sample& sample, const Grid& grid) {
  return evaluate(kind, compute_ranks(sample), grid);
}

void WeightedEvalConfig::validate() const {
  if (!(omega >= 0.0 && omega < 0.5)) throw InvalidArgument("omega must lie in [0, 1/2)");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("c must lie in (0, 1)");
}

void apply_weighting(std::span<double> values, const Grid& grid, const WeightedEvalConfig& cfg,
                     std::size_t n) {
  cfg.validate();
  if (values.size() != grid.size()) throw GridMismatch("values do not match grid size");
  const double cut = cfg.c / static_cast<double>(n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double g = weight_g(grid.point(p));
    if (cfg.restrict_to_support && g < cut) {
      values[p] = 0.0;
    } else if (cfg.omega != 0.0) {
      values[p] = g < std::numeric_limits<double>::min() ? 0.0 : values[p] / std::pow(g, cfg.omega);
    }
  }
}

GridEvaluation process_on_grid(EstimatorKind kind, const Sample& data,
                               const GridEvaluation& reference, double scale,
                               const GridPtr& grid,
                               const std::optional<WeightedEvalConfig>& weighting) {
  if (!grid) throw InvalidArgument("process_on_grid needs a grid");
  if (!reference.grid) throw GridMismatch("reference evaluation has no grid");
  require_same_grid(*reference.grid, *grid);
  if (!(scale > 0.0)) throw InvalidArgument("process scale must be positive");
  std::vector<double> values = evaluate(kind, data, *grid);
  for (std::size_t p = 0; p < values.size(); ++p) {
    values[p] = scale * (values[p] - reference.values[p]);
  }
  if (weighting) apply_weighting(values, *grid, *weighting, data.n());
  return GridEvaluation(grid, std::move(values));
}

}  // namespace copsub
