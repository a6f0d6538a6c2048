#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "copsub/errors.hpp"
#include "copsub/harness.hpp"
#include "copsub/report.hpp"

using namespace copsub;
using Catch::Matchers::WithinAbs;

namespace {

std::string all_tables(const ExperimentReport& r) {
  std::string s;
  for (const auto& t : r.tables) s += t.name + "\n" + table_csv(t);
  return s;
}

ExperimentConfig small_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.n = 30;
  c.M = 20;
  c.mc_reps = 4;
  c.target_reps = 200;
  c.workers = 1;
  return c;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("copsub_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("default subsample sizes") {
  CHECK(default_b(100) == 28);
  CHECK(default_b(100, Functional::ks) == 10);
  CHECK(default_b(200) == 56);
  CHECK(default_b(8) == 2);
  CHECK(default_b(8, Functional::ks) == 2);
  CHECK_THROWS_AS(default_b(7), InvalidArgument);
}

TEST_CASE("experiment names") {
  for (auto e : {Experiment::cov_at_points, Experiment::ks_cvm_quantiles,
                 Experiment::timeseries_sweep, Experiment::pickands_band}) {
    CHECK(parse_experiment(to_string(e)) == e);
  }
  CHECK(parse_experiment("ts-sweep") == Experiment::timeseries_sweep);
  CHECK_THROWS_AS(parse_experiment("table9"), InvalidArgument);
}

TEST_CASE("configuration defaults and validation") {
  ExperimentConfig c;
  CHECK(c.resolved_b() == std::vector<std::size_t>{28});
  CHECK(c.resolved_kind() == EstimatorKind::rank);
  CHECK_FALSE(c.resolved_center());
  CHECK(c.resolved_grid().size() == 81);
  c.experiment = Experiment::ks_cvm_quantiles;
  CHECK(c.resolved_center());
  c.experiment = Experiment::pickands_band;
  CHECK(c.resolved_kind() == EstimatorKind::checkerboard);
  c.experiment = Experiment::timeseries_sweep;
  c.n = 200;
  CHECK(c.resolved_b().size() == 10);
  CHECK(c.resolved_b().back() == 100);

  ExperimentConfig bad;
  bad.b_values = {100};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.b_values = {1};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);

  const auto echo = ExperimentConfig{}.echo();
  bool has_seed = false;
  for (const auto& [k, v] : echo) has_seed = has_seed || (k == "seed" && v == "20240601");
  CHECK(has_seed);
}

TEST_CASE("method comparison reports are deterministic across runs and worker counts") {
  auto c = small_config(Experiment::cov_at_points);
  c.methods = {ResamplingMethod::subsampling, ResamplingMethod::empirical_bootstrap,
               ResamplingMethod::multiplier};
  const auto a = run_method_comparison(c);
  const auto b = run_method_comparison(c);
  c.workers = 3;
  const auto d = run_method_comparison(c);
  CHECK(all_tables(a) == all_tables(b));
  CHECK(all_tables(a) == all_tables(d));
  CHECK(a.table("targets").rows.size() == 16);
  CHECK(a.table("means").rows.size() == 48);
  CHECK(a.table("mse_x1e4").rows.size() == 48);
  const std::string p = "(0.333333,0.333333)x(0.333333,0.333333)";
  CHECK(a.value("means", "sub", p, "cov") > 0.0);
  CHECK(a.value("targets", "truth", p, "cov") > 0.0);
  CHECK(a.value("targets", "truth", p, "cov") ==
        a.value("targets", "truth", "(0.333333,0.333333)x(0.333333,0.333333)", "cov"));
  CHECK_THROWS_AS(a.value("means", "nope", p, "cov"), InvalidArgument);
}

TEST_CASE("single replicate runs are reproducible") {
  auto c = small_config(Experiment::ks_cvm_quantiles);
  c.mc_reps = 1;
  c.M = 1;
  c.methods = {ResamplingMethod::subsampling, ResamplingMethod::b_out_of_n};
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(all_tables(a) == all_tables(b));
  const auto& t = a.table("targets");
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].statistic == "KS");
  CHECK(t.rows[0].point == "0.90");
  CHECK(t.rows[3].statistic == "CvM");
  CHECK(t.rows[3].point == "0.95");
  CHECK(t.rows[1].value >= t.rows[0].value);
}

TEST_CASE("ground truth depends only on the seed") {
  auto c = small_config(Experiment::cov_at_points);
  const auto a = run_ground_truth(c);
  c.mc_reps = 99;
  c.M = 3;
  c.workers = 2;
  const auto b = run_ground_truth(c);
  CHECK(a.values == b.values);
  c.seed += 1;
  CHECK(run_ground_truth(c).values != a.values);
}

TEST_CASE("time-series sweep layout") {
  auto c = small_config(Experiment::timeseries_sweep);
  c.n = 40;
  c.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
  c.b_values = {5, 10};
  c.target_reps = 100;
  const auto iid = run_experiment(c);
  CHECK(iid.table("mse_x1e4").rows.size() == 2 * 2 * 4);
  CHECK(iid.value("mse_x1e4", "sub_blocks", "b=5@0.90", "KS") >= 0.0);
  CHECK(iid.value("mse_x1e4", "sub_iid", "b=10@0.95", "CvM") >= 0.0);
  c.beta = 0.66;
  c.truth_series_length = 20000;
  const auto dep = run_experiment(c);
  CHECK(dep.table("mse_x1e4").rows.size() == 2 * 4);
}

TEST_CASE("Pickands coverage layout") {
  auto c = small_config(Experiment::pickands_band);
  c.copula = CopulaSpec::make(Family::gumbel, 0.33, 2);
  c.n = 40;
  c.mc_reps = 3;
  c.M = 10;
  c.simplex_k = 4;
  const auto r = run_experiment(c);
  const double cov = r.value("coverage", "sub", "all", "coverage");
  CHECK((cov >= 0.0 && cov <= 1.0));
  CHECK(r.value("coverage", "sub", "all", "nominal") == 0.9);
  CHECK(r.value("coverage", "sub", "all", "mean_radius") > 0.0);
  CHECK(r.table("curve").rows.size() == 2 * 5);
  CHECK_THAT(r.value("curve", "truth", "(0.5,0.5)", "A"), WithinAbs(0.5 * std::pow(2.0, 0.67), 1e-12));
}

TEST_CASE("CSV ingestion") {
  std::istringstream plain("0.5,1\n-2,3e2\n\"7.25\",8\n");
  const Sample s = parse_csv(plain);
  REQUIRE(s.n() == 3);
  REQUIRE(s.d() == 2);
  CHECK(s(1, 1) == 300.0);
  CHECK(s(2, 0) == 7.25);

  std::istringstream header("x,y\n1,2\n3,4\n");
  CHECK(parse_csv(header, true).n() == 2);

  std::istringstream bad("1,2\nabc,4\n");
  try {
    parse_csv(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.column() == 1);
  }
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(parse_csv(ragged), ParseError);
  std::istringstream inf("1,2\n3,inf\n");
  CHECK_THROWS_AS(parse_csv(inf), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), EmptyInput);
  CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv"), InvalidArgument);
}

TEST_CASE("CSV round trip is exact") {
  const Sample s(3, 2, {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.7, 1e-300});
  const auto dir = temp_dir("csv");
  std::filesystem::create_directories(dir);
  write_csv(s, dir / "s.csv");
  CHECK(ingest_csv(dir / "s.csv") == s);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report emission") {
  ExperimentReport r;
  r.config = {{"n", "100"}, {"seed", "7"}};
  r.tables.push_back({"means", {{"sub", "(0.5,0.5)", "cov", 0.125}, {"boot", "p", "KS", -1.5}}});
  r.runtime_seconds = 1.5;
  CHECK(table_csv(r.tables[0]) == "method,point,statistic,value\r\nsub,\"(0.5,0.5)\",cov,0.125\r\nboot,p,KS,-1.5\r\n");
  const auto dir = temp_dir("report");
  emit_report(r, dir);
  REQUIRE(std::filesystem::exists(dir / "means.csv"));
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["seed"] == "7");
  CHECK(j["runtime_seconds"] == 1.5);
  std::filesystem::remove_all(dir);
}
