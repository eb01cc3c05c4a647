#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hpssd/error.hpp"
#include "hpssd/harness.hpp"
#include "hpssd/io.hpp"
#include "hpssd/render.hpp"

using namespace hpssd;

namespace {

std::optional<double> maybe(Rng& rng) {
  if (bernoulli(rng, 0.2)) return std::nullopt;
  return uniform01(rng) * std::pow(10.0, -static_cast<double>(uniform_index(rng, 8)));
}

RunResult random_result(Rng& rng, std::int64_t id) {
  RunResult r;
  r.config = sample_run_config(rng(), id);
  r.population_size = static_cast<std::int64_t>(uniform_index(rng, 40000));
  r.edge_count = static_cast<std::int64_t>(uniform_index(rng, 400000));
  r.y = uniform01(rng);
  r.phi_y = maybe(rng);
  r.phi_k = maybe(rng);
  r.golden_estimate = maybe(rng);
  r.golden_drawn = 1000 + static_cast<std::int64_t>(uniform_index(rng, 1000));
  r.golden_size = static_cast<std::int64_t>(uniform_index(rng, 2000));
  for (auto& s : r.scenarios) {
    s.seed_estimate = maybe(rng);
    s.estimate = maybe(rng);
    s.n = static_cast<std::int64_t>(uniform_index(rng, 5000));
    s.n0 = static_cast<std::int64_t>(uniform_index(rng, 2000));
  }
  return r;
}

}  // namespace

TEST_CASE("results csv round trip is exact") {
  Rng rng{2718};
  std::vector<RunResult> runs;
  for (int i = 0; i < 300; ++i) runs.push_back(random_result(rng, i));
  std::stringstream buf;
  write_results_header(buf);
  for (const auto& r : runs) write_results_row(buf, r);
  const auto back = read_results_csv(buf);
  REQUIRE(back.size() == runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) REQUIRE(back[i] == runs[i]);
}

TEST_CASE("results header") {
  std::ostringstream out;
  write_results_header(out);
  const std::string header = out.str();
  CHECK(header.rfind("run_id,master_seed,stream_id,p_D,omega_count,target_mean_degree,w,gamma,r_v,", 0) == 0);
  CHECK(header.find("yhat_IV,n_IV,n0_IV\n") != std::string::npos);
  CHECK(results_columns().size() == 17 + 16);
}

TEST_CASE("malformed results") {
  SUBCASE("empty") {
    std::istringstream in("");
    CHECK_THROWS_AS(read_results_csv(in), DataError);
  }
  SUBCASE("wrong header") {
    std::istringstream in("a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_results_csv(in), DataError);
  }
  Rng rng{1};
  std::ostringstream good;
  write_results_header(good);
  write_results_row(good, random_result(rng, 0));
  SUBCASE("short row strict and lenient") {
    const std::string text = good.str() + "1,2,3\n";
    std::istringstream strict(text), lenient(text);
    CHECK_THROWS_AS(read_results_csv(strict), DataError);
    CHECK(read_results_csv(lenient, true).size() == 1);
  }
  SUBCASE("unparsable field") {
    std::string row;
    {
      std::ostringstream o;
      write_results_row(o, random_result(rng, 1));
      row = o.str();
    }
    row.replace(row.find(','), 1, ",x");
    std::istringstream in(good.str() + row);
    CHECK_THROWS_AS(read_results_csv(in), DataError);
  }
}

TEST_CASE("csv quoting") {
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("manifest json") {
  const auto m = manifest_from_json(nlohmann::json::parse(R"({"master_seed": 42, "scale": "paper", "parallelism": 3,
                                                               "output_dir": "out"})"));
  CHECK(m.master_seed == 42);
  CHECK(m.n_runs == kPaperRuns);
  CHECK(m.parallelism == 3);
  CHECK(m.output_dir == "out");
  CHECK(manifest_from_json(nlohmann::json::parse(R"({"scale": "desk", "n_runs": 10})")).n_runs == 10);
  CHECK(manifest_from_json(nlohmann::json::object()).n_runs == kDeskRuns);

  const auto echo = manifest_to_json(m);
  const auto again = manifest_from_json(echo);
  CHECK(again.master_seed == m.master_seed);
  CHECK(again.n_runs == m.n_runs);
  CHECK(echo.at("engine_version") == kEngineVersion);

  for (const char* bad : {R"([1, 2])", R"({"scale": "huge"})", R"({"n_runs": 0})", R"({"n_runs": "ten"})",
                          R"({"parallelism": 0})", R"({"master_seed": -1})"})
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json::parse(bad)), ConfigError);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "hpssd_test_atomic";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / "f.txt";
  write_file_atomically(path, [](std::ostream& o) { o << "one"; });
  write_file_atomically(path, [](std::ostream& o) { o << "two"; });
  std::ifstream in(path);
  std::string s;
  in >> s;
  CHECK(s == "two");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
}

TEST_CASE("report outputs") {
  Rng rng{3};
  std::vector<RunResult> runs;
  for (int i = 0; i < 40; ++i) {
    RunResult r = random_result(rng, i);
    r.y = 0.2 + 0.1 * uniform01(rng);
    r.phi_y = 0.05 * uniform01(rng);
    r.phi_k = 0.1 * uniform01(rng);
    for (auto& s : r.scenarios) {
      s.seed_estimate = r.y + 0.02 * (uniform01(rng) - 0.5);
      s.estimate = r.y + 0.02 * (uniform01(rng) - 0.5);
    }
    runs.push_back(r);
  }
  const EvaluationReport report = evaluate(runs);
  const auto j = report_to_json(report);
  CHECK(j.at("n_runs") == 40);
  CHECK(j.at("scenarios").contains("IV"));

  const auto dir = std::filesystem::temp_directory_path() / "hpssd_test_tables";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto written = write_report_tables(report, dir);
  CHECK(written.size() == 6);
  for (const auto& p : written) CHECK(std::filesystem::file_size(p) > 0);

  const std::string text = render_tables(report);
  CHECK(text.find("Mid-High") != std::string::npos);
  CHECK(svg_quartile_bars(report, Statistic::zeta).rfind("<svg", 0) == 0);
  CHECK(svg_phi_density(runs).rfind("<svg", 0) == 0);

  const EvaluationReport single = evaluate(std::vector<RunResult>{runs.front()});
  CHECK(report_to_json(single).at("gamma_cutpoints").is_null());
}
