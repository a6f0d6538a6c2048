#include "copsub/pickands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "copsub/errors.hpp"
#include "copsub/inference.hpp"
#include "copsub/parallel.hpp"
#include "copsub/special.hpp"

namespace copsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_simplex_point(std::span<const double> w) {
  if (w.size() < 2) throw InvalidArgument("simplex point needs at least two coordinates");
  double s = 0.0;
  for (double x : w) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("simplex coordinate outside [0,1]");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9) throw InvalidArgument("simplex point does not sum to 1");
}

// Trapezoid sums with steps h, 2h and 4h over n + 1 equispaced nodes (n divisible by 4).
std::array<double, 3> trapezoid_levels(const std::function<double(double)>& g, double a, double b,
                                       std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  std::array<double, 3> sums{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k <= n; ++k) {
    const double v = g(k == n ? b : a + h * static_cast<double>(k));
    const double edge = (k == 0 || k == n) ? 0.5 : 1.0;
    sums[0] += edge * v;
    if (k % 2 == 0) sums[1] += edge * v;
    if (k % 4 == 0) sums[2] += edge * v;
  }
  return {sums[0] * h, sums[1] * 2.0 * h, sums[2] * 4.0 * h};
}

std::size_t round_up4(double x) {
  const auto k = static_cast<std::size_t>(std::ceil(x / 4.0));
  return std::max<std::size_t>(k, 1) * 4;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(s_min > 0.0 && s_min < 1.0 && s_max > 1.0)) {
    throw InvalidArgument("quadrature range must satisfy 0 < s_min < 1 < s_max");
  }
  if (nodes < 8 || max_nodes < nodes) throw InvalidArgument("invalid quadrature node counts");
  if (!(tolerance > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
}

std::vector<std::vector<double>> simplex_grid(std::size_t d, std::size_t k) {
  if (d < 2 || k < 1) throw InvalidArgument("simplex grid needs d >= 2 and k >= 1");
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> c(d, 0);
  // Compositions of k into d nonnegative parts, first coordinate ascending.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t left) {
    if (j == d - 1) {
      c[j] = left;
      std::vector<double> w(d);
      for (std::size_t t = 0; t < d; ++t) w[t] = static_cast<double>(c[t]) / static_cast<double>(k);
      out.push_back(std::move(w));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, k);
  return out;
}

double pickands_nu(const CopulaFunction& f, std::span<const double> w,
                   const QuadratureConfig& config) {
  config.validate();
  check_simplex_point(w);
  const std::size_t d = w.size();
  std::vector<double> u(d);
  auto copula_at = [&](double s) {
    for (std::size_t j = 0; j < d; ++j) u[j] = std::exp(-s * w[j]);
    return f(u);
  };
  // In x = ln s the measure ds / s becomes dx.
  auto left = [&](double x) { return copula_at(std::exp(x)) - 1.0; };
  auto right = [&](double x) { return copula_at(std::exp(x)); };
  const double a = std::log(config.s_min);
  const double b = std::log(config.s_max);

  double err = kInf;
  for (std::size_t nodes = config.nodes; nodes <= config.max_nodes; nodes *= 2) {
    const double frac = -a / (b - a);
    const std::size_t nl = round_up4(static_cast<double>(nodes) * frac);
    const std::size_t nr = round_up4(static_cast<double>(nodes) * (1.0 - frac));
    const auto tl = trapezoid_levels(left, a, 0.0, nl);
    const auto tr = trapezoid_levels(right, 0.0, b, nr);
    double t[3];
    for (int k = 0; k < 3; ++k) t[k] = tl[k] + tr[k];
    const double fine = (4.0 * t[0] - t[1]) / 3.0;
    const double coarse = (4.0 * t[1] - t[2]) / 3.0;
    err = std::abs(fine - coarse);
    if (err <= config.tolerance) {
      // Near s = 0 the integrand is linear in s, so the omitted piece equals its value at s_min.
      const double integral = fine + left(a);
      return std::exp(-kEulerGamma - integral);
    }
  }
  throw QuadratureNonconvergence("Pickands integral did not reach tolerance " +
                                     std::to_string(config.tolerance),
                                 err);
}

double checkerboard_nu(const RankMatrix& ranks, std::span<const double> w) {
  ranks.require_tie_free();
  check_simplex_point(w);
  if (w.size() != ranks.d()) throw InvalidArgument("simplex point dimension differs from data");
  const std::size_t n = ranks.n();
  const std::size_t d = ranks.d();
  const double nd = static_cast<double>(n);

  // Factor j of observation i is min(1, max(0, n e^{-s w_j} - (R_ij - 1))):
  // 1 for s <= a_j, 0 for s >= c_j and linear in e^{-s w_j} in between.
  std::vector<double> a(d), c(d), breaks;
  struct Term {
    double coef;
    double lambda;
  };
  std::vector<Term> terms, next;
  double total = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    breaks.assign(1, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
      const double r = ranks(i, j);
      if (w[j] == 0.0) {
        a[j] = kInf;
        c[j] = kInf;
        continue;
      }
      a[j] = std::log(nd / r) / w[j];
      c[j] = r > 1.0 ? std::log(nd / (r - 1.0)) / w[j] : kInf;
      if (a[j] > 0.0) breaks.push_back(a[j]);
      if (c[j] < kInf) breaks.push_back(c[j]);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(kInf);

    double lo = 0.0;
    for (double hi : breaks) {
      const double indicator = (lo > 0.0 && hi <= 1.0) ? std::log(hi / lo) : 0.0;
      terms.assign(1, {1.0, 0.0});
      bool zero = false;
      for (std::size_t j = 0; j < d && !zero; ++j) {
        if (hi <= a[j]) continue;
        if (lo >= c[j]) {
          zero = true;
          break;
        }
        const double shift = ranks(i, j) - 1.0;
        next.clear();
        for (const Term& t : terms) {
          next.push_back({t.coef * nd, t.lambda + w[j]});
          if (shift != 0.0) next.push_back({-t.coef * shift, t.lambda});
        }
        terms.swap(next);
      }
      double piece = 0.0;
      if (!zero) {
        for (const Term& t : terms) {
          if (lo == 0.0) {
            // First piece: the product equals 1 at s = 0, so subtracting the
            // indicator leaves sum_t coef_t (e^{-lambda s} - 1) / s.
            piece -= t.coef * expint_ein(t.lambda * hi);
          } else if (t.lambda > 0.0) {
            piece += t.coef * (expint_e1(t.lambda * lo) - (hi < kInf ? expint_e1(t.lambda * hi) : 0.0));
          } else {
            piece += t.coef * std::log(hi / lo);
          }
        }
      }
      total += piece - indicator;
      lo = hi;
    }
  }
  return std::exp(-kEulerGamma - total / nd);
}

double pickands_nu(EstimatorKind kind, const RankMatrix& ranks, std::span<const double> w,
                   const QuadratureConfig& config) {
  switch (kind) {
    case EstimatorKind::checkerboard:
      return checkerboard_nu(ranks, w);
    case EstimatorKind::beta: {
      ranks.require_tie_free();
      const int n = static_cast<int>(ranks.n());
      const std::size_t d = ranks.d();
      std::vector<std::vector<double>> tails(d);
      auto f = [&](std::span<const double> u) {
        for (std::size_t j = 0; j < d; ++j) binomial_upper_tails(n, u[j], tails[j]);
        double sum = 0.0;
        for (std::size_t i = 0; i < ranks.n(); ++i) {
          double prod = 1.0;
          for (std::size_t j = 0; j < d; ++j) prod *= tails[j][static_cast<std::size_t>(ranks(i, j))];
          sum += prod;
        }
        return sum / n;
      };
      return pickands_nu(f, w, config);
    }
    default:
      throw InvalidArgument("Pickands estimation needs the checkerboard or beta estimator");
  }
}

bool PickandsCurve::covers(std::span<const double> truth) const {
  if (!band_radius) throw InvalidArgument("curve has no band");
  if (truth.size() != values.size()) throw InvalidArgument("truth does not match the w grid");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k] - truth[k]) > *band_radius) return false;
  }
  return true;
}

PickandsCurve pickands_estimate(EstimatorKind kind, const RankMatrix& ranks,
                                const std::vector<std::vector<double>>& w_grid,
                                const QuadratureConfig& config) {
  if (w_grid.empty()) throw EmptyInput("empty simplex grid");
  ranks.require_tie_free();
  PickandsCurve curve;
  curve.w_grid = w_grid;
  curve.values.reserve(w_grid.size());
  for (const auto& w : w_grid) {
    const double v = pickands_nu(kind, ranks, w, config);
    if (!(std::isfinite(v) && v > 0.0)) throw NumericFailure("Pickands estimate is not positive");
    curve.values.push_back(v);
  }
  return curve;
}

PickandsCurve pickands_band(EstimatorKind kind, const Sample& sample,
                            const SubsampleScheme& scheme, std::size_t M,
                            const std::vector<std::vector<double>>& w_grid, double alpha,
                            const RngStream& rng, const PickandsBandOptions& options) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidArgument("alpha must lie in (0, 1/2)");
  scheme.validate();
  if (scheme.n != sample.n()) throw InvalidArgument("scheme size differs from sample size");
  PickandsCurve curve = pickands_estimate(kind, compute_ranks(sample), w_grid, options.quadrature);
  const double scale = scheme.correction() * std::sqrt(static_cast<double>(scheme.b));

  auto sup_of = [&](std::span<const std::size_t> idx) {
    const PickandsCurve sub =
        pickands_estimate(kind, compute_ranks(sample.subset(idx)), w_grid, options.quadrature);
    double sup = 0.0;
    for (std::size_t k = 0; k < w_grid.size(); ++k) {
      sup = std::max(sup, std::abs(scale * (sub.values[k] - curve.values[k])));
    }
    return sup;
  };

  const bool blocks = scheme.mode == SubsampleMode::consecutive_blocks;
  std::vector<double> sups;
  if (blocks) {
    const std::size_t n_blocks = scheme.n - scheme.b + 1;
    std::vector<std::size_t> block_of_row;
    if (options.enumerate) {
      for (std::size_t m = 1; m <= n_blocks; ++m) block_of_row.push_back(m);
    } else {
      for (std::size_t m = 0; m < M; ++m) {
        RngStream r = rng.substream(m);
        block_of_row.push_back(1 + static_cast<std::size_t>(r.below(n_blocks)));
      }
    }
    std::vector<std::size_t> needed(block_of_row);
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    std::vector<double> cache(n_blocks + 1, 0.0);
    parallel_for(needed.size(), options.workers, [&](std::size_t k) {
      cache[needed[k]] = sup_of(block_indices(scheme, needed[k]));
    });
    for (std::size_t m : block_of_row) sups.push_back(cache[m]);
  } else if (options.enumerate) {
    const auto subsets = enumerate_subsamples(scheme, 1'000'000);
    sups.resize(subsets.size());
    parallel_for(subsets.size(), options.workers, [&](std::size_t m) { sups[m] = sup_of(subsets[m]); });
  } else {
    if (M < 1) throw InvalidArgument("need at least one replicate");
    sups.resize(M);
    parallel_for(M, options.workers, [&](std::size_t m) {
      RngStream r = rng.substream(m);
      sups[m] = sup_of(draw_subsample_indices(scheme, r));
    });
  }
  curve.band_radius = empirical_quantile(sups, 1.0 - alpha) / std::sqrt(static_cast<double>(sample.n()));
  curve.replicate_sups = std::move(sups);
  return curve;
}

}  // namespace copsub
