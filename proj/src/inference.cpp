#include "copsub/inference.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "copsub/errors.hpp"

namespace copsub {

PointSet thirds_point_set() {
  return {{1.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}, {2.0 / 3, 1.0 / 3}, {2.0 / 3, 2.0 / 3}};
}

std::string_view to_string(Functional f) { return f == Functional::ks ? "KS" : "CvM"; }

double ks_functional(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("KS functional of an empty grid");
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ks_functional(const GridEvaluation& values) { return ks_functional(values.values); }

double cvm_functional(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw EmptyInput("CvM functional of an empty grid");
  if (weights.size() != values.size()) throw GridMismatch("weights do not match values");
  double s = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p) s += weights[p] * values[p] * values[p];
  return s;
}

double cvm_functional(const GridEvaluation& values) {
  return cvm_functional(values.values, values.grid->weights());
}

std::vector<double> functional_values(const ReplicateSet& set, Functional f) {
  std::vector<double> out(set.M);
  for (std::size_t m = 0; m < set.M; ++m) {
    out[m] = f == Functional::ks ? ks_functional(set.row(m))
                                 : cvm_functional(set.row(m), set.grid->weights());
  }
  return out;
}

Grid default_grid(std::size_t d) {
  if (d < 2) throw InvalidArgument("default grid needs d >= 2");
  std::vector<double> axis;
  if (d == 2) {
    for (int i = 1; i <= 9; ++i) axis.push_back(i / 10.0);
  } else {
    for (int i = 1; i <= 4; ++i) axis.push_back(i / 5.0);
  }
  return Grid::tensor(std::vector<std::vector<double>>(d, axis));
}

Grid grid_from_points(const PointSet& points) {
  if (points.empty()) throw EmptyInput("empty point set");
  const std::size_t d = points.front().size();
  std::vector<double> flat;
  std::vector<std::vector<double>> axes(d);
  for (const auto& p : points) {
    if (p.size() != d) throw InvalidArgument("points of differing dimension");
    for (std::size_t j = 0; j < d; ++j) {
      if (!(p[j] > 0.0 && p[j] < 1.0)) throw InvalidArgument("points must be interior");
      flat.push_back(p[j]);
      axes[j].push_back(p[j]);
    }
  }
  std::size_t total = 1;
  for (auto& a : axes) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    total *= a.size();
  }
  if (total == points.size()) {
    Grid tensor = Grid::tensor(axes);
    if (std::equal(flat.begin(), flat.end(), tensor.points().begin())) return tensor;
  }
  return Grid(d, std::move(flat));
}

Matrix covariance_at_points(const ReplicateSet& set, const PointSet& points) {
  if (points.empty()) throw EmptyInput("empty point set");
  if (set.M == 0) throw EmptyInput("empty replicate set");
  const std::size_t k = points.size();
  std::vector<std::size_t> cols(k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto idx = set.grid->find(points[a], 1e-12);
    if (!idx) throw PointNotOnGrid("point " + std::to_string(a) + " is not on the replicate grid");
    cols[a] = *idx;
  }
  std::vector<double> mean(k, 0.0);
  for (std::size_t m = 0; m < set.M; ++m) {
    for (std::size_t a = 0; a < k; ++a) mean[a] += set.at(m, cols[a]);
  }
  for (double& x : mean) x /= static_cast<double>(set.M);
  Matrix cov(k, k);
  std::vector<double> dev(k);
  for (std::size_t m = 0; m < set.M; ++m) {
    for (std::size_t a = 0; a < k; ++a) dev[a] = set.at(m, cols[a]) - mean[a];
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t c = a; c < k; ++c) cov(a, c) += dev[a] * dev[c];
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = a; c < k; ++c) {
      cov(a, c) /= static_cast<double>(set.M);
      cov(c, a) = cov(a, c);
    }
  }
  return cov;
}

double empirical_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw EmptyInput("quantile of an empty set");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  const auto M = static_cast<double>(values.size());
  auto k = static_cast<std::size_t>(std::ceil(M * p));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::vector<double> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

ConfidenceInterval basic_ci(double psi_hat, std::span<const double> replicate_psis, double alpha,
                            std::size_t n) {
  if (replicate_psis.empty()) throw EmptyInput("no replicate values");
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidArgument("alpha must lie in (0, 1/2)");
  if (n < 1) throw InvalidArgument("sample size must be positive");
  const double root = std::sqrt(static_cast<double>(n));
  const double hi = empirical_quantile(replicate_psis, 1.0 - alpha / 2.0);
  const double lo = empirical_quantile(replicate_psis, alpha / 2.0);
  return {psi_hat - hi / root, psi_hat - lo / root, 1.0 - alpha};
}

double spearman_rho(EstimatorKind kind, const Sample& sample) {
  if (sample.d() != 2) throw InvalidArgument("Spearman's rho needs d = 2");
  const std::size_t n = sample.n();
  if (kind == EstimatorKind::rank || kind == EstimatorKind::ecdf) {
    const RankMatrix ranks = compute_ranks(sample);
    if (kind == EstimatorKind::rank) ranks.require_tie_free();
    const double nd = static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (1.0 - ranks(i, 0) / nd) * (1.0 - ranks(i, 1) / nd);
    return 12.0 * s / nd - 3.0;
  }
  constexpr int k = 64;
  std::vector<double> axis(k);
  for (int i = 0; i < k; ++i) axis[i] = (i + 0.5) / k;
  const Grid grid = Grid::tensor({axis, axis});
  const auto values = evaluate(kind, sample, grid);
  double s = 0.0;
  for (double v : values) s += v;
  return 12.0 * s / static_cast<double>(values.size()) - 3.0;
}

ConfidenceInterval spearman_rho_ci(EstimatorKind kind, const Sample& sample,
                                   const SubsampleScheme& scheme, std::size_t M, double alpha,
                                   const RngStream& rng) {
  if (M < 1) throw InvalidArgument("need at least one replicate");
  const double psi = spearman_rho(kind, sample);
  const double scale = scheme.correction() * std::sqrt(static_cast<double>(scheme.b));
  std::vector<double> reps(M);
  for (std::size_t m = 0; m < M; ++m) {
    RngStream r = rng.substream(m);
    const auto idx = draw_subsample_indices(scheme, r);
    reps[m] = scale * (spearman_rho(kind, sample.subset(idx)) - psi);
  }
  return basic_ci(psi, reps, alpha, sample.n());
}

}  // namespace copsub
