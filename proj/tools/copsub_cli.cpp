// Command-line front end for the Monte Carlo experiments and for inference on CSV data.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "copsub/errors.hpp"
#include "copsub/harness.hpp"
#include "copsub/inference.hpp"
#include "copsub/pickands.hpp"
#include "copsub/report.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Options {
  std::string family = "clayton";
  double tau = 0.33;
  std::size_t n = 100;
  std::size_t d = 2;
  std::vector<std::size_t> b;
  std::size_t M = 500;
  std::size_t reps = 300;
  std::size_t target_reps = 20000;
  std::vector<std::string> methods{"sub"};
  std::string estimator;
  std::string fpc = "default";
  std::string center = "default";
  std::uint64_t seed = 20240601;
  std::string out;
  std::string grid = "default";
  double beta = 0.0;
  double alpha = 0.1;
  std::size_t simplex_k = 20;
  std::size_t workers = 0;
  std::string target = "cov";
  std::string input;
  bool header = false;
  bool quiet = false;
};

std::optional<bool> on_off(const std::string& v) {
  if (v == "default") return std::nullopt;
  return v == "on";
}

copsub::ExperimentConfig make_config(const Options& o, copsub::Experiment e) {
  copsub::ExperimentConfig c;
  c.experiment = e;
  c.copula = copsub::CopulaSpec::make(copsub::parse_family(o.family), o.tau, o.d);
  c.beta = o.beta;
  c.n = o.n;
  c.b_values = o.b;
  c.M = o.M;
  c.mc_reps = o.reps;
  c.target_reps = o.target_reps;
  c.methods.clear();
  for (const auto& m : o.methods) c.methods.push_back(copsub::parse_resampling_method(m));
  if (!o.estimator.empty()) c.kind = copsub::parse_estimator_kind(o.estimator);
  c.fpc = on_off(o.fpc);
  c.center = on_off(o.center);
  c.seed = o.seed;
  c.grid_k = o.grid == "default" ? 0 : std::stoul(o.grid);
  c.alpha = o.alpha;
  c.simplex_k = o.simplex_k;
  c.workers = o.workers;
  c.validate();
  return c;
}

void publish(const copsub::ExperimentReport& report, const Options& o) {
  if (!o.out.empty()) copsub::emit_report(report, o.out);
  if (o.quiet) return;
  for (const auto& t : report.tables) {
    std::cout << "# " << t.name << '\n' << copsub::table_csv(t);
  }
  std::fprintf(stderr, "runtime %.2f s\n", report.runtime_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subsampling and bootstrap inference for empirical copula processes"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  Options o;

  app.add_option("--family", o.family, "independence | clayton | gumbel")->capture_default_str();
  app.add_option("--tau", o.tau, "Kendall's tau of the bivariate margins")->capture_default_str();
  app.add_option("--n", o.n, "Sample size")->capture_default_str();
  app.add_option("--d", o.d, "Dimension")->capture_default_str();
  app.add_option("--b", o.b, "Subsample size(s); default floor(0.28 n) or the 10..100 sweep");
  app.add_option("--M", o.M, "Replicates per sample")->capture_default_str();
  app.add_option("--reps", o.reps, "Monte Carlo repetitions")->capture_default_str();
  app.add_option("--target-reps", o.target_reps, "Samples for the ground-truth pass")
      ->capture_default_str();
  app.add_option("--methods", o.methods, "sub, boot, bOutOfN, mult")->capture_default_str();
  app.add_option("--estimator", o.estimator, "deheuvels | ecdf | rank | checkerboard | beta");
  app.add_option("--fpc", o.fpc, "Finite-population correction")
      ->check(CLI::IsMember({"on", "off", "default"}))
      ->capture_default_str();
  app.add_option("--center", o.center, "Center the replicates")
      ->check(CLI::IsMember({"on", "off", "default"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--out", o.out, "Directory for CSV tables and manifest.json");
  app.add_option("--grid", o.grid, "default, or k for the k^d interior grid")->capture_default_str();
  app.add_option("--beta", o.beta, "AR(1) coefficient (ts-sweep)")->capture_default_str();
  app.add_option("--alpha", o.alpha, "Band / interval level")->capture_default_str();
  app.add_option("--simplex-k", o.simplex_k, "Simplex grid resolution")->capture_default_str();
  app.add_option("--workers", o.workers, "Threads (0 = all cores)")->capture_default_str();
  app.add_flag("--quiet", o.quiet, "Do not print tables");

  auto* cov = app.add_subcommand("cov-at-p", "Covariance of the empirical copula process at P");
  auto* ks = app.add_subcommand("ks-cvm", "Quantiles of the KS and CvM functionals");
  auto* ts = app.add_subcommand("ts-sweep", "Block-subsampling MSEs over a sweep of b");
  auto* pick = app.add_subcommand("pickands-band", "Coverage of the Pickands confidence band");
  auto* truth = app.add_subcommand("ground-truth", "Only the precise targets");
  truth->add_option("--target", o.target, "cov | ks-cvm | ts")
      ->check(CLI::IsMember({"cov", "ks-cvm", "ts"}))
      ->capture_default_str();
  auto* rho = app.add_subcommand("rho-ci", "Subsampling interval for Spearman's rho of a CSV sample");
  rho->add_option("--input", o.input, "CSV file, one observation per row")->required();
  rho->add_flag("--header", o.header, "First line is a header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    using copsub::Experiment;
    if (*cov) publish(copsub::run_experiment(make_config(o, Experiment::cov_at_points)), o);
    if (*ks) publish(copsub::run_experiment(make_config(o, Experiment::ks_cvm_quantiles)), o);
    if (*ts) publish(copsub::run_experiment(make_config(o, Experiment::timeseries_sweep)), o);
    if (*pick) publish(copsub::run_experiment(make_config(o, Experiment::pickands_band)), o);
    if (*truth) {
      const Experiment e = o.target == "cov"      ? Experiment::cov_at_points
                           : o.target == "ks-cvm" ? Experiment::ks_cvm_quantiles
                                                  : Experiment::timeseries_sweep;
      const auto config = make_config(o, e);
      copsub::ExperimentReport report;
      report.config = config.echo();
      report.tables.push_back(copsub::targets_table(copsub::run_ground_truth(config)));
      publish(report, o);
    }
    if (*rho) {
      const auto sample = copsub::ingest_csv(o.input, o.header);
      const auto kind = o.estimator.empty() ? copsub::EstimatorKind::rank
                                            : copsub::parse_estimator_kind(o.estimator);
      const std::size_t b = o.b.empty() ? copsub::default_b(sample.n()) : o.b.front();
      const auto scheme = copsub::SubsampleScheme::iid(sample.n(), b, on_off(o.fpc));
      const auto ci = copsub::spearman_rho_ci(kind, sample, scheme, o.M, o.alpha,
                                              copsub::RngStream(o.seed));
      std::printf("rho,%.10g\nlower,%.10g\nupper,%.10g\nlevel,%.4g\n",
                  copsub::spearman_rho(kind, sample), ci.lower, ci.upper, ci.level);
    }
  } catch (const copsub::NumericFailure& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kNumericError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return 0;
}
