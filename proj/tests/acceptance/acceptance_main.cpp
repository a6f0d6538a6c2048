#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "copsub/errors.hpp"
#include "copsub/estimators.hpp"
#include "copsub/harness.hpp"
#include "copsub/inference.hpp"
#include "copsub/pickands.hpp"
#include "copsub/report.hpp"
#include "copsub/resampling.hpp"
#include "copsub/sampling.hpp"
#include "copsub/special.hpp"

using namespace copsub;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }
  Outcome outcome() const {
    std::string d;
    for (const auto& s : notes_) d += (d.empty() ? "" : "; ") + s;
    for (const auto& s : failures_) d += (d.empty() ? "" : "; ") + std::string("FAILED ") + s;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Upper triangle of the covariance at the thirds points, row by row.
const std::vector<std::pair<int, int>> kUpper{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                              {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
const std::vector<double> kTruthCov{0.0488, 0.0198, 0.0200, 0.0100, 0.0337,
                                    0.0091, 0.0185, 0.0338, 0.0185, 0.0513};
const std::vector<double> kSubCov{0.0562, 0.0205, 0.0207, 0.0089, 0.0371,
                                  0.0084, 0.0182, 0.0375, 0.0183, 0.0583};

std::string cov_label(int a, int c) {
  const auto pts = thirds_point_set();
  auto lab = [](const std::vector<double>& p) {
    std::ostringstream s;
    s << '(' << p[0] << ',' << p[1] << ')';
    return s.str();
  };
  return lab(pts[a]) + "x" + lab(pts[c]);
}

double target_value(const Targets& t, const std::string& point, const std::string& stat) {
  for (std::size_t e = 0; e < t.values.size(); ++e) {
    if (t.points[e] == point && t.statistics[e] == stat) return t.values[e];
  }
  throw InvalidArgument("missing target " + point + " " + stat);
}

ExperimentConfig covariance_config() {
  ExperimentConfig c;
  c.experiment = Experiment::cov_at_points;
  c.copula = CopulaSpec::make(Family::clayton, 0.33, 2);
  c.n = 100;
  c.target_reps = 20000;
  c.mc_reps = 300;
  c.M = 500;
  c.b_values = {28};
  return c;
}

ExperimentConfig quantile_config() {
  ExperimentConfig c = covariance_config();
  c.experiment = Experiment::ks_cvm_quantiles;
  c.center = true;
  return c;
}

// Shared, lazily computed runs.
struct Runs {
  std::optional<Targets> cov_truth;
  double cov_truth_seconds = 0.0;
  std::optional<ExperimentReport> cov_methods;
  std::optional<Targets> quantile_truth;

  const Targets& covariance_truth() {
    if (!cov_truth) {
      const auto t0 = std::chrono::steady_clock::now();
      cov_truth = run_ground_truth(covariance_config());
      cov_truth_seconds = seconds_since(t0);
    }
    return *cov_truth;
  }
  const ExperimentReport& covariance_methods() {
    if (!cov_methods) {
      auto c = covariance_config();
      c.methods = {ResamplingMethod::subsampling, ResamplingMethod::empirical_bootstrap};
      cov_methods = run_method_comparison(c, covariance_truth());
    }
    return *cov_methods;
  }
  const Targets& quantiles() {
    if (!quantile_truth) quantile_truth = run_ground_truth(quantile_config());
    return *quantile_truth;
  }
};

Outcome criterion1(Runs& runs) {
  Checker ck;
  const Targets& t = runs.covariance_truth();
  double worst = 0.0;
  for (std::size_t e = 0; e < kUpper.size(); ++e) {
    const double v = target_value(t, cov_label(kUpper[e].first, kUpper[e].second), "cov");
    const double dev = std::abs(v - kTruthCov[e]);
    worst = std::max(worst, dev);
    ck.require(dev <= 0.005, "entry " + std::to_string(e + 1) + " = " + fmt("%.4f", v) +
                                 " vs " + fmt("%.4f", kTruthCov[e]));
  }
  ck.note("max |dev| " + fmt("%.4f", worst) + " (tol 0.005)");
  ck.note("runtime " + fmt("%.1f", runs.cov_truth_seconds) + " s (limit 300 s)");
  ck.require(runs.cov_truth_seconds <= 300.0, "runtime");
  return ck.outcome();
}

Outcome criterion2(Runs& runs) {
  Checker ck;
  const auto& r = runs.covariance_methods();
  double worst = 0.0;
  for (std::size_t e = 0; e < kUpper.size(); ++e) {
    const auto label = cov_label(kUpper[e].first, kUpper[e].second);
    const double v = r.value("means", "sub", label, "cov");
    const double dev = std::abs(v - kSubCov[e]);
    worst = std::max(worst, dev);
    ck.require(dev <= 0.006, "entry " + std::to_string(e + 1) + " = " + fmt("%.4f", v) +
                                 " vs " + fmt("%.4f", kSubCov[e]));
    if (kUpper[e].first == kUpper[e].second) {
      ck.require(v > kTruthCov[e], "diagonal " + label + " " + fmt("%.4f", v) +
                                       " not above target " + fmt("%.4f", kTruthCov[e]));
    }
  }
  ck.note("max |dev| of subsampling means " + fmt("%.4f", worst) + " (tol 0.006)");
  ck.note("diagonal means vs exact covariances checked");
  return ck.outcome();
}

Outcome criterion3(Runs& runs) {
  Checker ck;
  const auto& r = runs.covariance_methods();
  const auto label = cov_label(0, 0);
  const double sub = r.value("mse_x1e4", "sub", label, "cov");
  const double boot = r.value("mse_x1e4", "boot", label, "cov");
  ck.note("MSE x1e4 at (1/3,1/3): sub " + fmt("%.4f", sub) + ", boot " + fmt("%.4f", boot) +
          ", ratio " + fmt("%.3f", sub / boot) + " (need < 0.7)");
  ck.require(sub < boot && sub / boot < 0.7, "sub/boot ratio");
  return ck.outcome();
}

Outcome criterion4(Runs& runs) {
  Checker ck;
  const auto& t = runs.quantiles();
  const struct {
    const char* level;
    const char* stat;
    double reference;
    double tol;
  } rows[] = {{"0.90", "KS", 0.5664, 0.01},
              {"0.95", "KS", 0.6437, 0.01},
              {"0.90", "CvM", 0.0464, 0.002},
              {"0.95", "CvM", 0.0580, 0.002}};
  for (const auto& row : rows) {
    const double v = target_value(t, row.level, row.stat);
    const std::string name = std::string(row.stat) + "@" + row.level;
    ck.note(name + " " + fmt("%.4f", v) + " vs " + fmt("%.4f", row.reference));
    ck.require(std::abs(v - row.reference) <= row.tol, name);
  }
  return ck.outcome();
}

Outcome criterion5(Runs& runs) {
  Checker ck;
  const Targets& truth = runs.quantiles();
  auto c = quantile_config();
  c.methods = {ResamplingMethod::subsampling, ResamplingMethod::empirical_bootstrap};
  const auto r28 = run_method_comparison(c, truth);
  for (const char* level : {"0.90", "0.95"}) {
    const double sub = r28.value("mse_x1e4", "sub", level, "CvM");
    const double boot = r28.value("mse_x1e4", "boot", level, "CvM");
    ck.note(std::string("CvM@") + level + " MSE x1e4 sub(b=28) " + fmt("%.4f", sub) + ", boot " +
            fmt("%.4f", boot) + ", boot/sub " + fmt("%.2f", boot / sub) + " (need >= 3)");
    ck.require(boot >= 3.0 * sub, std::string("CvM@") + level + " boot/sub factor");
  }
  c.b_values = {10};
  c.methods = {ResamplingMethod::subsampling, ResamplingMethod::multiplier};
  const auto r10 = run_method_comparison(c, truth);
  for (const char* level : {"0.90", "0.95"}) {
    const double sub = r10.value("mse_x1e4", "sub", level, "KS");
    const double mult = r10.value("mse_x1e4", "mult", level, "KS");
    const double ratio = sub / mult;
    ck.note(std::string("KS@") + level + " MSE x1e4 sub(b=10) " + fmt("%.3f", sub) + ", mult " +
            fmt("%.3f", mult) + ", ratio " + fmt("%.2f", ratio) + " (need within [1/3, 3])");
    ck.require(ratio <= 3.0 && ratio >= 1.0 / 3.0, std::string("KS@") + level + " sub/mult factor");
  }
  return ck.outcome();
}

Outcome criterion6() {
  Checker ck;
  ExperimentConfig c;
  c.experiment = Experiment::timeseries_sweep;
  c.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
  c.n = 200;
  c.mc_reps = 200;
  c.M = 500;
  c.target_reps = 20000;
  c.iid_comparison = true;
  c.beta = 0.0;
  const auto indep = run_timeseries_sweep(c);
  c.beta = 0.66;
  const auto dep = run_timeseries_sweep(c);
  const auto sweep = c.resolved_b();
  const std::vector<std::pair<std::string, std::string>> stats{
      {"0.90", "KS"}, {"0.95", "KS"}, {"0.90", "CvM"}, {"0.95", "CvM"}};
  std::size_t ok = 0;
  std::size_t total = 0;
  double min_ratio = 1e300;
  for (std::size_t b : sweep) {
    for (const auto& [level, stat] : stats) {
      const std::string point = "b=" + std::to_string(b) + "@" + level;
      const double m0 = indep.value("mse_x1e4", "sub_blocks", point, stat);
      const double m66 = dep.value("mse_x1e4", "sub_blocks", point, stat);
      ++total;
      ok += m66 > m0;
      min_ratio = std::min(min_ratio, m66 / m0);
      ck.require(m66 > m0, stat + "@" + point + " beta=0.66 " + fmt("%.3f", m66) +
                               " <= beta=0 " + fmt("%.3f", m0));
    }
  }
  ck.note(std::to_string(ok) + "/" + std::to_string(total) +
          " (b, statistic) pairs with MSE(beta=0.66) > MSE(beta=0), min ratio " +
          fmt("%.2f", min_ratio));
  for (const auto& [level, stat] : stats) {
    double blocks = 0.0;
    double iid = 0.0;
    for (std::size_t b : sweep) {
      const std::string point = "b=" + std::to_string(b) + "@" + level;
      blocks += indep.value("mse_x1e4", "sub_blocks", point, stat);
      iid += indep.value("mse_x1e4", "sub_iid", point, stat);
    }
    blocks /= static_cast<double>(sweep.size());
    iid /= static_cast<double>(sweep.size());
    ck.note(stat + "@" + level + " sweep-average MSE blocks " + fmt("%.3f", blocks) + " vs iid " +
            fmt("%.3f", iid));
    ck.require(blocks > iid, stat + "@" + level + " blocks vs iid");
  }
  return ck.outcome();
}

// Rank copula of the rows `idx`, counting within the subsample.
double brute_rank_copula(const Sample& x, const std::vector<std::size_t>& idx,
                         std::span<const double> u) {
  const std::size_t m = idx.size();
  std::size_t hits = 0;
  for (std::size_t a : idx) {
    bool in = true;
    for (std::size_t j = 0; j < x.d(); ++j) {
      std::size_t c = 0;
      for (std::size_t k : idx) c += x(k, j) <= x(a, j);
      in = in && static_cast<double>(c) / static_cast<double>(m) <= u[j];
    }
    hits += in;
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

Outcome criterion7() {
  Checker ck;
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(7, 0);

  // Margins of the checkerboard and beta copulas.
  double margin_dev = 0.0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t d = 2 + rep % 2;
    const std::size_t n = 5 + rng.below(60);
    const Sample s = sample_copula(CopulaSpec::make(Family::clayton, 0.4, d), n, rng);
    const RankMatrix r = compute_ranks(s);
    for (int k = 0; k <= 40; ++k) {
      const double u = k / 40.0 + (k % 3 == 1 ? 0.0123 / n : 0.0);
      if (u > 1.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> pt(d, 1.0);
        pt[j] = u;
        margin_dev = std::max(margin_dev, std::abs(checkerboard_copula(r, pt) - u));
        margin_dev = std::max(margin_dev, std::abs(beta_copula(r, pt) - u));
      }
    }
  }
  ck.require(margin_dev <= 1e-12, "margins " + fmt("%.2e", margin_dev));
  ck.note("margins max dev " + fmt("%.1e", margin_dev));

  // Proximity to the rank copula on the rank lattice, its midpoints and a fine grid.
  double worst_ratio = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + rep % 2;
    const std::size_t n = 5 + rng.below(40);
    const Sample s = sample_copula(CopulaSpec::make(Family::gumbel, 0.5, d), n, rng);
    const RankMatrix r = compute_ranks(s);
    std::vector<double> axis;
    for (std::size_t k = 0; k <= 2 * n; ++k) axis.push_back(static_cast<double>(k) / (2.0 * n));
    if (d == 2) {
      for (int k = 1; k < 40; ++k) axis.push_back(k / 40.0 + 1e-9);
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    const Grid g = Grid::tensor(std::vector<std::vector<double>>(d, axis));
    const auto hat = evaluate(EstimatorKind::rank, r, g);
    const auto deh = evaluate(EstimatorKind::deheuvels, r, g);
    const auto cb = evaluate(EstimatorKind::checkerboard, r, g);
    double m = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      m = std::max({m, std::abs(deh[p] - hat[p]), std::abs(cb[p] - hat[p])});
    }
    worst_ratio = std::max(worst_ratio, m / (static_cast<double>(d) / static_cast<double>(n)));
  }
  ck.require(worst_ratio <= 1.0 + 1e-12, "d/n bounds");
  ck.note("sup distance / (d/n) at most " + fmt("%.3f", worst_ratio) + " over 200 samples");

  // Binomial tails.
  double tail_dev = 0.0;
  for (int n : {1, 2, 7, 30, 99, 250, 500}) {
    for (double t : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.999}) {
      const auto tails = binomial_upper_tails(n, t);
      double sum = 0.0;
      for (int k = 1; k <= n; ++k) {
        sum += tails[static_cast<std::size_t>(k)];
        tail_dev = std::max(tail_dev, std::abs(beta_cdf(k, n, t) - tails[static_cast<std::size_t>(k)]));
      }
      tail_dev = std::max(tail_dev, std::abs(sum - n * t));
    }
  }
  ck.require(tail_dev <= 1e-10, "binomial tails " + fmt("%.2e", tail_dev));
  ck.note("binomial-tail identity max dev " + fmt("%.1e", tail_dev));

  // Full enumeration against a brute-force oracle.
  std::size_t cases = 0;
  bool enum_ok = true;
  for (std::size_t n = 5; n <= 8; ++n) {
    const Sample x = sample_copula(CopulaSpec::make(Family::clayton, 0.33, 2), n, rng);
    std::vector<double> axis;
    for (int k = 1; k <= 9; ++k) axis.push_back(0.1 * k + 0.003);
    const auto grid = std::make_shared<const Grid>(Grid::tensor({axis, axis}));
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::vector<double> full(grid->size());
    for (std::size_t p = 0; p < grid->size(); ++p) full[p] = brute_rank_copula(x, all, grid->point(p));
    for (std::size_t b = 2; b <= 4 && b < n; ++b) {
      for (auto scheme : {SubsampleScheme::iid(n, b), SubsampleScheme::blocks(n, b)}) {
        ReplicateOptions opt;
        opt.enumerate = true;
        const auto set = build_replicate_set(EstimatorKind::rank, x, scheme, 1, grid, RngStream(1), opt);
        std::vector<std::vector<std::size_t>> subsets;
        if (scheme.mode == SubsampleMode::consecutive_blocks) {
          for (std::size_t m = 0; m + b <= n; ++m) {
            std::vector<std::size_t> s(b);
            for (std::size_t k = 0; k < b; ++k) s[k] = m + k;
            subsets.push_back(s);
          }
        } else {
          for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != b) continue;
            std::vector<std::size_t> s;
            for (std::size_t k = 0; k < n; ++k) {
              if (mask >> k & 1u) s.push_back(k);
            }
            subsets.push_back(s);
          }
          std::sort(subsets.begin(), subsets.end());
        }
        enum_ok = enum_ok && set.M == subsets.size();
        const double scale = scheme.correction() * std::sqrt(static_cast<double>(b));
        for (std::size_t m = 0; m < subsets.size() && enum_ok; ++m) {
          for (std::size_t p = 0; p < grid->size(); ++p) {
            const double expect = scale * (brute_rank_copula(x, subsets[m], grid->point(p)) - full[p]);
            enum_ok = enum_ok && set.at(m, p) == expect;
          }
        }
        ++cases;
      }
    }
  }
  ck.require(enum_ok, "enumeration oracle");
  if (enum_ok) ck.note("enumeration oracle exact in " + std::to_string(cases) + " (n, b, mode) cases");

  // Finite-population correction.
  bool fpc_ok = true;
  for (std::size_t n : {std::size_t{10}, std::size_t{100}, std::size_t{200}}) {
    for (std::size_t b : {std::size_t{2}, n / 4, n / 2, n - 1}) {
      const auto s = SubsampleScheme::iid(n, b);
      fpc_ok = fpc_ok && std::abs(s.correction() - 1.0 / std::sqrt(1.0 - static_cast<double>(b) / n)) <= 1e-14 * s.correction();
      fpc_ok = fpc_ok && s.correction() == std::sqrt(static_cast<double>(n) / static_cast<double>(n - b));
      fpc_ok = fpc_ok && SubsampleScheme::iid(n, b, false).correction() == 1.0;
      fpc_ok = fpc_ok && SubsampleScheme::blocks(n, b).correction() == 1.0;
    }
  }
  fpc_ok = fpc_ok && SubsampleScheme::iid(100, 50).correction() == std::sqrt(2.0);
  {
    const Sample x = sample_copula(CopulaSpec::make(Family::clayton, 0.33, 2), 40, rng);
    const auto grid = std::make_shared<const Grid>(default_grid(2));
    const GridEvaluation center(grid, evaluate(EstimatorKind::rank, x, *grid));
    const auto idx = draw_subsample_indices(SubsampleScheme::iid(40, 10), rng);
    const auto on = subsample_replicate(EstimatorKind::rank, x, idx, center, *grid, SubsampleScheme::iid(40, 10, true));
    const auto off = subsample_replicate(EstimatorKind::rank, x, idx, center, *grid, SubsampleScheme::iid(40, 10, false));
    const double c = 1.0 / std::sqrt(0.75);
    for (std::size_t p = 0; p < on.size(); ++p) fpc_ok = fpc_ok && std::abs(on[p] - c * off[p]) <= 4e-16 * std::max(1.0, std::abs(on[p]));
  }
  ck.require(fpc_ok, "fpc factor");
  if (fpc_ok) ck.note("fpc factor exact");

  // nu of the independence copula and of the logistic model.
  const CopulaFunction indep = [](std::span<const double> u) {
    double p = 1.0;
    for (double v : u) p *= v;
    return p;
  };
  double nu_dev = 0.0;
  for (const auto& w : simplex_grid(2, 20)) nu_dev = std::max(nu_dev, std::abs(pickands_nu(indep, w) - 1.0));
  for (const auto& w : simplex_grid(3, 4)) nu_dev = std::max(nu_dev, std::abs(pickands_nu(indep, w) - 1.0));
  ck.require(nu_dev <= 1e-5, "nu(independence) " + fmt("%.2e", nu_dev));
  ck.note("nu(independence) max dev " + fmt("%.1e", nu_dev));
  const auto gumbel = CopulaSpec::make(Family::gumbel, 0.5, 2);
  const CopulaFunction g = [&](std::span<const double> u) { return copula_cdf(gumbel, u); };
  double gum_dev = 0.0;
  for (double w : {0.1, 0.5, 0.9}) {
    const std::vector<double> ww{w, 1.0 - w};
    gum_dev = std::max(gum_dev, std::abs(pickands_nu(g, ww) - std::hypot(w, 1.0 - w)));
  }
  ck.require(gum_dev <= 1e-4, "Gumbel closed form " + fmt("%.2e", gum_dev));
  ck.note("logistic closed form max dev " + fmt("%.1e", gum_dev));

  // Normal quantiles.
  const std::pair<double, double> phi[] = {{0.975, 1.9599639845400539},
                                           {0.9, 1.2815515655446006},
                                           {0.3, -0.52440051270804082},
                                           {1e-10, -6.3613409024040562},
                                           {0.999999, 4.7534243088170878},
                                           {0.5, 0.0}};
  double phi_dev = 0.0;
  for (const auto& [p, z] : phi) phi_dev = std::max(phi_dev, std::abs(normal_quantile(p) - z));
  ck.require(phi_dev <= 1e-6, "normal quantiles " + fmt("%.2e", phi_dev));
  ck.note("normal quantile max dev " + fmt("%.1e", phi_dev));

  // Determinism across runs and worker counts.
  bool det_ok = true;
  {
    auto tables = [](const ExperimentReport& r) {
      std::string s;
      for (const auto& t : r.tables) s += t.name + "\n" + table_csv(t);
      return s;
    };
    ExperimentConfig c = quantile_config();
    c.n = 60;
    c.mc_reps = 6;
    c.M = 50;
    c.target_reps = 400;
    c.methods = {ResamplingMethod::subsampling, ResamplingMethod::empirical_bootstrap,
                 ResamplingMethod::multiplier};
    c.workers = 1;
    const std::string a = tables(run_experiment(c));
    const std::string a2 = tables(run_experiment(c));
    c.workers = 4;
    const std::string b = tables(run_experiment(c));
    det_ok = det_ok && a == a2 && a == b;

    ExperimentConfig ts;
    ts.experiment = Experiment::timeseries_sweep;
    ts.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
    ts.n = 50;
    ts.b_values = {5, 20};
    ts.mc_reps = 4;
    ts.M = 40;
    ts.target_reps = 200;
    ts.workers = 1;
    const std::string t1 = tables(run_experiment(ts));
    ts.workers = 3;
    det_ok = det_ok && t1 == tables(run_experiment(ts));

    ExperimentConfig pk;
    pk.experiment = Experiment::pickands_band;
    pk.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
    pk.n = 40;
    pk.mc_reps = 3;
    pk.M = 20;
    pk.simplex_k = 5;
    pk.workers = 1;
    const std::string p1 = tables(run_experiment(pk));
    pk.workers = 2;
    det_ok = det_ok && p1 == tables(run_experiment(pk));
  }
  ck.require(det_ok, "determinism");
  if (det_ok) ck.note("reports bit-identical across runs and worker counts");

  const double secs = seconds_since(t0);
  ck.note("runtime " + fmt("%.1f", secs) + " s (limit 120 s)");
  ck.require(secs <= 120.0, "runtime");
  return ck.outcome();
}

Outcome criterion8() {
  Checker ck;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.experiment = Experiment::pickands_band;
  c.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
  c.n = 200;
  c.b_values = {56};
  c.alpha = 0.1;
  c.mc_reps = 500;
  c.M = 500;
  c.simplex_k = 20;
  const auto r = run_pickands_coverage(c);
  const double coverage = r.value("coverage", "sub", "all", "coverage");
  const double secs = seconds_since(t0);
  ck.note("coverage " + fmt("%.3f", coverage) + " (need 0.90 +/- 0.05), mean radius " +
          fmt("%.4f", r.value("coverage", "sub", "all", "mean_radius")));
  ck.require(std::abs(coverage - 0.90) <= 0.05, "coverage");
  ck.note("runtime " + fmt("%.1f", secs) + " s (limit 600 s)");
  ck.require(secs <= 600.0, "runtime");
  return ck.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));
  Runs runs;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ground-truth covariance", [&] { return criterion1(runs); }},
      {"subsampling covariance means", [&] { return criterion2(runs); }},
      {"covariance MSE ordering", [&] { return criterion3(runs); }},
      {"KS/CvM quantile targets", [&] { return criterion4(runs); }},
      {"quantile-estimator comparison", [&] { return criterion5(runs); }},
      {"time-series monotonicity", [] { return criterion6(); }},
      {"property suite", [] { return criterion7(); }},
      {"Pickands band coverage", [] { return criterion8(); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
