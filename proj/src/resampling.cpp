#include "copsub/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "copsub/errors.hpp"
#include "copsub/parallel.hpp"
#include "lattice.hpp"

namespace copsub {

namespace {

constexpr std::uint64_t kMaxEnumeration = 10'000'000;

std::vector<double> scaled_difference(std::vector<double> est, const GridEvaluation& center,
                                      double scale) {
  for (std::size_t p = 0; p < est.size(); ++p) est[p] = scale * (est[p] - center.values[p]);
  return est;
}

void check_center(const GridEvaluation& center, const Grid& grid) {
  if (!center.grid) throw GridMismatch("center evaluation has no grid");
  require_same_grid(*center.grid, grid);
}

void check_indices(std::span<const std::size_t> indices, std::size_t n) {
  for (std::size_t i : indices) {
    if (i >= n) {
      throw IndexOutOfRange("row index " + std::to_string(i) + " outside sample of size " +
                            std::to_string(n));
    }
  }
}

std::vector<std::size_t> draw_with_replacement(std::size_t n, std::size_t count, RngStream& rng) {
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
  return idx;
}

// All size-b subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(b);
  std::iota(c.begin(), c.end(), std::size_t{0});
  for (;;) {
    out.push_back(c);
    std::size_t i = b;
    while (i > 0 && c[i - 1] == n - b + (i - 1)) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t k = i; k < b; ++k) c[k] = c[k - 1] + 1;
  }
  return out;
}

ReplicateSet make_set(const GridPtr& grid, std::size_t M, ResamplingMethod method,
                      EstimatorKind kind) {
  ReplicateSet set;
  set.grid = grid;
  set.M = M;
  set.values.assign(M * grid->size(), 0.0);
  set.method = method;
  set.kind = kind;
  return set;
}

void store_row(ReplicateSet& set, std::size_t m, const std::vector<double>& row) {
  std::copy(row.begin(), row.end(), set.values.begin() + static_cast<std::ptrdiff_t>(m * set.points()));
}

}  // namespace

std::string_view to_string(SubsampleMode mode) {
  return mode == SubsampleMode::iid_without_replacement ? "iid" : "blocks";
}

std::optional<std::uint64_t> binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact; divide out gcd(r, i) first so only the
    // final product can overflow.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(r / g, factor, &r)) return std::nullopt;
  }
  return r;
}

SubsampleScheme SubsampleScheme::iid(std::size_t n, std::size_t b, std::optional<bool> fpc) {
  SubsampleScheme s{SubsampleMode::iid_without_replacement, n, b, fpc.value_or(true)};
  s.validate();
  return s;
}

SubsampleScheme SubsampleScheme::blocks(std::size_t n, std::size_t b, std::optional<bool> fpc) {
  SubsampleScheme s{SubsampleMode::consecutive_blocks, n, b, fpc.value_or(false)};
  s.validate();
  return s;
}

void SubsampleScheme::validate() const {
  if (b < 2 || b >= n) {
    throw InvalidArgument("subsample size b=" + std::to_string(b) + " must satisfy 2 <= b < n=" +
                          std::to_string(n));
  }
}

std::optional<std::uint64_t> SubsampleScheme::total() const {
  if (mode == SubsampleMode::consecutive_blocks) return n - b + 1;
  return binomial_coefficient(n, b);
}

double SubsampleScheme::correction() const {
  if (!fpc) return 1.0;
  return std::sqrt(static_cast<double>(n) / static_cast<double>(n - b));
}

std::vector<std::size_t> draw_subsample_indices(const SubsampleScheme& scheme, RngStream& rng) {
  scheme.validate();
  if (scheme.mode == SubsampleMode::consecutive_blocks) {
    return block_indices(scheme, 1 + static_cast<std::size_t>(rng.below(scheme.n - scheme.b + 1)));
  }
  std::vector<std::size_t> pool(scheme.n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < scheme.b; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(scheme.n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(scheme.b);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::vector<std::size_t>> enumerate_subsamples(const SubsampleScheme& scheme,
                                                           std::uint64_t limit) {
  scheme.validate();
  const auto total = scheme.total();
  if (!total || *total > limit) throw InvalidArgument("too many subsamples to enumerate");
  if (scheme.mode == SubsampleMode::iid_without_replacement) return all_subsets(scheme.n, scheme.b);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t m = 1; m <= scheme.n - scheme.b + 1; ++m) out.push_back(block_indices(scheme, m));
  return out;
}

std::vector<std::size_t> block_indices(const SubsampleScheme& scheme, std::size_t m) {
  scheme.validate();
  if (m < 1 || m > scheme.n - scheme.b + 1) {
    throw IndexOutOfRange("block index " + std::to_string(m) + " outside [1, " +
                          std::to_string(scheme.n - scheme.b + 1) + "]");
  }
  std::vector<std::size_t> idx(scheme.b);
  std::iota(idx.begin(), idx.end(), m - 1);
  return idx;
}

std::vector<double> subsample_replicate(EstimatorKind kind, const Sample& sample,
                                        std::span<const std::size_t> indices,
                                        const GridEvaluation& center, const Grid& grid,
                                        const SubsampleScheme& scheme) {
  scheme.validate();
  if (scheme.n != sample.n()) throw InvalidArgument("scheme size differs from sample size");
  if (indices.size() != scheme.b) throw InvalidArgument("subsample index count differs from b");
  check_indices(indices, sample.n());
  check_center(center, grid);
  const double scale = scheme.correction() * std::sqrt(static_cast<double>(scheme.b));
  return scaled_difference(evaluate(kind, sample.subset(indices), grid), center, scale);
}

std::string_view to_string(ResamplingMethod method) {
  switch (method) {
    case ResamplingMethod::subsampling: return "sub";
    case ResamplingMethod::empirical_bootstrap: return "boot";
    case ResamplingMethod::b_out_of_n: return "bOutOfN";
    case ResamplingMethod::multiplier: return "mult";
  }
  return "unknown";
}

ResamplingMethod parse_resampling_method(std::string_view name) {
  if (name == "sub" || name == "subsampling") return ResamplingMethod::subsampling;
  if (name == "boot" || name == "empirical_bootstrap") return ResamplingMethod::empirical_bootstrap;
  if (name == "bOutOfN" || name == "b_out_of_n") return ResamplingMethod::b_out_of_n;
  if (name == "mult" || name == "multiplier") return ResamplingMethod::multiplier;
  throw InvalidArgument("unknown resampling method '" + std::string(name) + "'");
}

std::vector<double> ReplicateSet::column(std::size_t p) const {
  if (p >= points()) throw IndexOutOfRange("replicate column out of range");
  std::vector<double> out(M);
  for (std::size_t m = 0; m < M; ++m) out[m] = at(m, p);
  return out;
}

void center_rows(ReplicateSet& set) {
  const std::size_t P = set.points();
  if (set.M == 0) return;
  std::vector<double> mean(P, 0.0);
  for (std::size_t m = 0; m < set.M; ++m) {
    for (std::size_t p = 0; p < P; ++p) mean[p] += set.values[m * P + p];
  }
  for (double& x : mean) x /= static_cast<double>(set.M);
  for (std::size_t m = 0; m < set.M; ++m) {
    for (std::size_t p = 0; p < P; ++p) set.values[m * P + p] -= mean[p];
  }
  set.centered = true;
}

ReplicateSet build_replicate_set(EstimatorKind kind, const Sample& sample,
                                 const SubsampleScheme& scheme, std::size_t M,
                                 const GridPtr& grid, const RngStream& rng,
                                 const ReplicateOptions& options) {
  if (!grid) throw InvalidArgument("replicate set needs a grid");
  scheme.validate();
  if (scheme.n != sample.n()) throw InvalidArgument("scheme size differs from sample size");
  const GridEvaluation center(grid, evaluate(kind, sample, *grid));
  const bool blocks = scheme.mode == SubsampleMode::consecutive_blocks;
  const std::size_t n_blocks = scheme.n - scheme.b + 1;

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> block_of_row;
  if (options.enumerate) {
    if (blocks) {
      block_of_row.resize(n_blocks);
      std::iota(block_of_row.begin(), block_of_row.end(), std::size_t{1});
    } else {
      subsets = enumerate_subsamples(scheme, kMaxEnumeration);
    }
    M = blocks ? n_blocks : subsets.size();
  } else if (blocks) {
    block_of_row.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      RngStream r = rng.substream(m);
      block_of_row[m] = 1 + static_cast<std::size_t>(r.below(n_blocks));
    }
  }
  if (M < 1) throw InvalidArgument("need at least one replicate");

  ReplicateSet set = make_set(grid, M, ResamplingMethod::subsampling, kind);
  set.scheme = scheme;

  if (blocks) {
    // Each distinct block is evaluated once and shared by every row that drew it.
    std::vector<std::size_t> needed(block_of_row);
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    std::vector<std::vector<double>> cache(n_blocks + 1);
    parallel_for(needed.size(), options.workers, [&](std::size_t k) {
      const auto idx = block_indices(scheme, needed[k]);
      cache[needed[k]] = subsample_replicate(kind, sample, idx, center, *grid, scheme);
    });
    for (std::size_t m = 0; m < M; ++m) store_row(set, m, cache[block_of_row[m]]);
  } else {
    parallel_for(M, options.workers, [&](std::size_t m) {
      std::vector<std::size_t> idx;
      if (options.enumerate) {
        idx = subsets[m];
      } else {
        RngStream r = rng.substream(m);
        idx = draw_subsample_indices(scheme, r);
      }
      store_row(set, m, subsample_replicate(kind, sample, idx, center, *grid, scheme));
    });
  }
  if (options.center_replicates) center_rows(set);
  return set;
}

std::vector<double> empirical_bootstrap_replicate(const Sample& sample, RngStream& rng,
                                                  const Grid& grid, const GridEvaluation& center) {
  const auto idx = draw_with_replacement(sample.n(), sample.n(), rng);
  return empirical_bootstrap_replicate(sample, idx, grid, center);
}

std::vector<double> empirical_bootstrap_replicate(const Sample& sample,
                                                  std::span<const std::size_t> indices,
                                                  const Grid& grid, const GridEvaluation& center) {
  if (indices.size() != sample.n()) throw InvalidArgument("bootstrap resample must have size n");
  return b_out_of_n_replicate(sample, indices, grid, center);
}

std::vector<double> b_out_of_n_replicate(const Sample& sample, std::size_t b, RngStream& rng,
                                         const Grid& grid, const GridEvaluation& center) {
  if (b < 2 || b > sample.n()) throw InvalidArgument("resample size must satisfy 2 <= b <= n");
  const auto idx = draw_with_replacement(sample.n(), b, rng);
  return b_out_of_n_replicate(sample, idx, grid, center);
}

std::vector<double> b_out_of_n_replicate(const Sample& sample,
                                         std::span<const std::size_t> indices, const Grid& grid,
                                         const GridEvaluation& center) {
  const std::size_t b = indices.size();
  if (b < 2 || b > sample.n()) throw InvalidArgument("resample size must satisfy 2 <= b <= n");
  check_indices(indices, sample.n());
  check_center(center, grid);
  return scaled_difference(evaluate(EstimatorKind::ecdf, sample.subset(indices), grid), center,
                           std::sqrt(static_cast<double>(b)));
}

double MultiplierConfig::resolve(std::size_t n) const {
  return bandwidth > 0.0 ? bandwidth : 1.0 / std::sqrt(static_cast<double>(n));
}

void MultiplierConfig::validate(std::size_t n) const {
  if (bandwidth < 0.0 || std::isnan(bandwidth)) throw InvalidArgument("bandwidth must be positive");
  const double h = resolve(n);
  if (!(h > 0.0 && h < 0.5)) throw InvalidArgument("bandwidth must lie in (0, 1/2)");
}

MultiplierBootstrap::MultiplierBootstrap(const Sample& sample, GridPtr grid,
                                         MultiplierConfig config)
    : n_(sample.n()), d_(sample.d()), grid_(std::move(grid)), ranks_(compute_ranks(sample)) {
  if (!grid_) throw InvalidArgument("multiplier bootstrap needs a grid");
  if (grid_->d() != d_) throw GridMismatch("grid dimension differs from data dimension");
  ranks_.require_tie_free();
  config.validate(n_);
  const double h = config.resolve(n_);
  const std::size_t P = grid_->size();

  copula_ = evaluate(EstimatorKind::rank, ranks_, *grid_);
  derivatives_.assign(P * d_, 0.0);
  point_thresholds_.assign(P, std::vector<std::int32_t>(d_));
  std::vector<double> shifted(d_);
  for (std::size_t p = 0; p < P; ++p) {
    const auto u = grid_->point(p);
    for (std::size_t j = 0; j < d_; ++j) point_thresholds_[p][j] = detail::rank_threshold(u[j], n_);
    for (std::size_t j = 0; j < d_; ++j) {
      std::copy(u.begin(), u.end(), shifted.begin());
      const double up = std::min(u[j] + h, 1.0);
      const double lo = std::max(u[j] - h, 0.0);
      shifted[j] = up;
      const double c_up = rank_copula(ranks_, shifted);
      shifted[j] = lo;
      const double c_lo = rank_copula(ranks_, shifted);
      derivatives_[p * d_ + j] = std::clamp((c_up - c_lo) / (up - lo), 0.0, 1.0);
    }
  }

  if (grid_->is_tensor()) {
    std::vector<std::vector<std::int32_t>> th(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      for (double a : grid_->axes()[j]) th[j].push_back(detail::rank_threshold(a, n_));
      dims_.push_back(th[j].size());
    }
    cells_ = detail::lattice_cells(ranks_.ranks(), n_, d_, th);
  }
}

std::vector<double> MultiplierBootstrap::replicate(std::span<const double> xi) const {
  if (xi.size() != n_) throw InvalidArgument("need one multiplier per observation");
  const std::size_t P = grid_->size();
  const double total = std::accumulate(xi.begin(), xi.end(), 0.0);

  // prefix[j][k] = sum of multipliers over rows with rank <= k in column j.
  std::vector<std::vector<double>> prefix(d_, std::vector<double>(n_ + 1, 0.0));
  for (std::size_t j = 0; j < d_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) prefix[j][static_cast<std::size_t>(ranks_(i, j))] = xi[i];
    for (std::size_t k = 1; k <= n_; ++k) prefix[j][k] += prefix[j][k - 1];
  }

  std::vector<double> joint;
  if (grid_->is_tensor()) {
    joint = detail::weighted_lattice_sums(cells_, xi, dims_);
  } else {
    joint.assign(P, 0.0);
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t i = 0; i < n_; ++i) {
        bool in = true;
        for (std::size_t j = 0; j < d_ && in; ++j) in = ranks_(i, j) <= point_thresholds_[p][j];
        if (in) joint[p] += xi[i];
      }
    }
  }

  const double inv_root = 1.0 / std::sqrt(static_cast<double>(n_));
  std::vector<double> row(P);
  for (std::size_t p = 0; p < P; ++p) {
    const auto u = grid_->point(p);
    double v = joint[p] - copula_[p] * total;
    for (std::size_t j = 0; j < d_; ++j) {
      const double marginal =
          prefix[j][static_cast<std::size_t>(point_thresholds_[p][j])] - u[j] * total;
      v -= derivatives_[p * d_ + j] * marginal;
    }
    row[p] = v * inv_root;
  }
  return row;
}

std::vector<double> MultiplierBootstrap::replicate(RngStream& rng) const {
  std::vector<double> xi(n_);
  for (double& x : xi) x = rng.normal();
  return replicate(xi);
}

std::vector<double> multiplier_replicate(const Sample& sample, const MultiplierConfig& config,
                                         RngStream& rng, const GridPtr& grid) {
  return MultiplierBootstrap(sample, grid, config).replicate(rng);
}

ReplicateSet build_bootstrap_set(ResamplingMethod method, const Sample& sample, std::size_t M,
                                 const GridPtr& grid, const RngStream& rng,
                                 bool center_replicates, std::size_t b, std::size_t workers) {
  if (!grid) throw InvalidArgument("replicate set needs a grid");
  if (M < 1) throw InvalidArgument("need at least one replicate");
  if (method == ResamplingMethod::subsampling) {
    throw InvalidArgument("use build_replicate_set for subsampling");
  }
  ReplicateSet set;
  if (method == ResamplingMethod::multiplier) {
    const MultiplierBootstrap boot(sample, grid);
    set = make_set(grid, M, method, EstimatorKind::rank);
    parallel_for(M, workers, [&](std::size_t m) {
      RngStream r = rng.substream(m);
      store_row(set, m, boot.replicate(r));
    });
  } else {
    const std::size_t size = method == ResamplingMethod::empirical_bootstrap ? sample.n() : b;
    if (size < 2 || size > sample.n()) {
      throw InvalidArgument("resample size must satisfy 2 <= b <= n");
    }
    const GridEvaluation center(grid, evaluate(EstimatorKind::ecdf, sample, *grid));
    set = make_set(grid, M, method, EstimatorKind::ecdf);
    parallel_for(M, workers, [&](std::size_t m) {
      RngStream r = rng.substream(m);
      store_row(set, m, b_out_of_n_replicate(sample, size, r, *grid, center));
    });
  }
  if (center_replicates) center_rows(set);
  return set;
}

}  // namespace copsub
