#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hpssd/error.hpp"
#include "hpssd/harness.hpp"
#include "hpssd/io.hpp"

using namespace hpssd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hpssd_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("run configurations") {
  CHECK(sample_run_config(7, 3) == sample_run_config(7, 3));
  CHECK_FALSE(sample_run_config(7, 3) == sample_run_config(7, 4));
  CHECK_FALSE(sample_run_config(7, 3) == sample_run_config(8, 3));

  using namespace ranges;
  std::vector<double> gammas;
  for (int i = 0; i < 10000; ++i) {
    const RunConfig c = sample_run_config(1, i);
    REQUIRE(c.run_id == i);
    REQUIRE(within_design_ranges(c));
    REQUIRE(c.p_D >= kPdMin);
    REQUIRE(c.p_D <= kPdMax);
    REQUIRE(c.omega_count >= kOmegaMin);
    REQUIRE(c.omega_count <= kOmegaMax);
    REQUIRE(c.target_mean_degree >= kDegreeMin);
    REQUIRE(c.target_mean_degree <= kDegreeMax);
    REQUIRE(c.w >= kWMin);
    REQUIRE(c.w <= kWMax);
    REQUIRE(c.gamma >= kGammaMin);
    REQUIRE(c.gamma <= kGammaMax);
    REQUIRE(c.r_v >= kRvMin);
    REQUIRE(c.r_v <= kRvMax);
    gammas.push_back(c.gamma);
  }
  // Kolmogorov-Smirnov against Uniform(0.2, 0.8); 1.628 / sqrt(n) is the
  // 1% critical value.
  std::sort(gammas.begin(), gammas.end());
  double d = 0.0;
  const double n = static_cast<double>(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double f = (gammas[i] - 0.2) / 0.6;
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK(validate(c).empty());
  c.r_v = 1.0;
  CHECK_FALSE(validate(c).empty());
  c = RunConfig{};
  c.omega_count = 50;
  CHECK(validate(c).empty());
  CHECK_FALSE(within_design_ranges(c));
}

TEST_CASE("single runs") {
  RunConfig c = sample_run_config(3, 0);
  c.omega_count = 5000;
  const RunResult a = execute_run(c);
  const RunResult b = execute_run(c);
  CHECK(a == b);
  for (Scenario s : kScenarios) {
    CHECK(a.at(s).n >= a.at(s).n0);
    CHECK(a.at(s).estimate);
  }
  CHECK(a.at(Scenario::I).seed_estimate == a.golden_estimate);
  CHECK(a.at(Scenario::I).n0 == a.golden_size);
  CHECK(a.at(Scenario::III).n0 == a.golden_size / 2);

  c.r_v = 0.0;
  const RunArtifacts art = execute_run_detailed(c);
  CHECK(art.result.golden_drawn == 1000);
  CHECK(art.result.golden_size == 1000);
  CHECK(art.result.population_size == static_cast<std::int64_t>(art.population.size()));
  CHECK(art.result.edge_count == static_cast<std::int64_t>(art.population.edges.size()));
  CHECK(art.result.y == doctest::Approx(art.population.prevalence()));
}

TEST_CASE("sweep basics") {
  SweepManifest m;
  m.master_seed = 5;
  m.n_runs = 1;
  m.output_dir = fresh_dir("one");
  std::int64_t last = 0;
  const SweepOutcome out = execute_sweep(m, [&](std::int64_t done, std::int64_t) { last = done; });
  CHECK(out.results.size() == 1);
  CHECK(out.errors.empty());
  CHECK(last == 1);
  CHECK(fs::exists(m.output_dir / kResultsFile));
  CHECK(fs::exists(m.output_dir / kReportFile));
  CHECK(fs::exists(m.output_dir / kManifestEcho));
  CHECK_FALSE(fs::exists(m.output_dir / kErrorsFile));
  std::ifstream in(m.output_dir / kResultsFile);
  const auto rows = read_results_csv(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == out.results[0]);
  CHECK(rows[0] == execute_run(sample_run_config(5, 0)));

  m.n_runs = 0;
  CHECK_THROWS_AS(execute_sweep(m), ConfigError);
}

TEST_CASE("sweeps are independent of scheduling and resume cleanly") {
  SweepManifest serial;
  serial.master_seed = 9;
  serial.n_runs = 6;
  serial.parallelism = 1;
  serial.output_dir = fresh_dir("serial");
  execute_sweep(serial);

  SweepManifest parallel = serial;
  parallel.parallelism = 4;
  parallel.output_dir = fresh_dir("parallel");
  execute_sweep(parallel);
  CHECK(slurp(serial.output_dir / kResultsFile) == slurp(parallel.output_dir / kResultsFile));
  CHECK(slurp(serial.output_dir / kReportFile) == slurp(parallel.output_dir / kReportFile));

  SweepManifest partial = serial;
  partial.n_runs = 3;
  partial.output_dir = fresh_dir("resume");
  execute_sweep(partial);
  // A torn trailing row as left by an interrupted sweep.
  {
    std::ofstream app(partial.output_dir / kResultsFile, std::ios::app);
    app << "3,9,123,0.2";
  }
  partial.n_runs = 6;
  const SweepOutcome resumed = execute_sweep(partial);
  CHECK(resumed.resumed == 3);
  CHECK(resumed.results.size() == 6);
  CHECK(slurp(serial.output_dir / kResultsFile) == slurp(partial.output_dir / kResultsFile));
}

TEST_CASE("rows from another master seed are not resumed") {
  SweepManifest m;
  m.master_seed = 2;
  m.n_runs = 2;
  m.output_dir = fresh_dir("foreign");
  fs::create_directories(m.output_dir);
  {
    std::ofstream out(m.output_dir / kResultsFile);
    write_results_header(out);
    RunResult r;
    r.config.run_id = 0;
    r.config.master_seed = 77;
    write_results_row(out, r);
  }
  const SweepOutcome out = execute_sweep(m);
  CHECK(out.resumed == 0);
  CHECK(out.results.size() == 2);
}

TEST_CASE("parallelism default") {
  CHECK(default_parallelism() >= 1);
}
