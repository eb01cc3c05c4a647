// hpssd: cliques-and-blocks population generator and hybrid
// probabilistic-snowball sampling simulator.
//
//   hpssd generate --seed 7 --omega 50 --out pop/
//   hpssd run      --seed 7 --run-index 3 --out run3/
//   hpssd sweep    --config manifest.json        (or --seed/--runs/--out)
//   hpssd report   sweep_out/results.csv --plot
//   hpssd plot     sweep_out/results.csv --out plots/
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or manifest error,
// 3 unreadable results data.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "hpssd/error.hpp"
#include "hpssd/harness.hpp"
#include "hpssd/io.hpp"
#include "hpssd/mixing.hpp"
#include "hpssd/render.hpp"

namespace fs = std::filesystem;
using namespace hpssd;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct ParamFlags {
  std::optional<double> p_D, degree, w, gamma, r_v;
  std::optional<std::int32_t> omega;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pd", p_D, "Centrality p_D of the risk-level distribution [0.15, 0.30]");
    cmd->add_option("--omega", omega, "Number of cliques [5000, 15000]");
    cmd->add_option("--degree", degree, "Target mean degree [5, 25]");
    cmd->add_option("--w", w, "Familism weight [0.1, 0.5]");
    cmd->add_option("--gamma", gamma, "Homophily exponent [0.2, 0.8]");
    cmd->add_option("--rv", r_v, "Universal attrition [0, 0.5]");
  }

  RunConfig apply(RunConfig c) const {
    if (p_D) c.p_D = *p_D;
    if (omega) c.omega_count = *omega;
    if (degree) c.target_mean_degree = *degree;
    if (w) c.w = *w;
    if (gamma) c.gamma = *gamma;
    if (r_v) c.r_v = *r_v;
    return c;
  }
};

std::string describe(const RunConfig& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "seed=%llu run=%lld p_D=%.4f omega=%d degree=%.3f w=%.4f gamma=%.4f r_v=%.4f",
                static_cast<unsigned long long>(c.master_seed), static_cast<long long>(c.run_id), c.p_D,
                c.omega_count, c.target_mean_degree, c.w, c.gamma, c.r_v);
  return buf;
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_atomically(path, [&](std::ostream& out) { out << text; });
}

std::vector<fs::path> write_plots(const EvaluationReport& report, std::span<const RunResult> runs,
                                  const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> paths = {dir / "phi_density.svg", dir / "zeta_quartiles.svg", dir / "delta_quartiles.svg",
                                 dir / "zeta_debiased_quartiles.svg"};
  write_text(paths[0], svg_phi_density(runs));
  write_text(paths[1], svg_quartile_bars(report, Statistic::zeta));
  write_text(paths[2], svg_quartile_bars(report, Statistic::mean_delta));
  write_text(paths[3], svg_quartile_bars(report, Statistic::zeta_debiased));
  return paths;
}

std::vector<RunResult> load_results(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto runs = read_results_csv(in);
  if (runs.empty()) throw DataError(path.string() + " holds no result rows");
  return runs;
}

int cmd_generate(std::uint64_t seed, const ParamFlags& flags, const fs::path& out_dir, bool dump_matrix) {
  RunConfig config = flags.apply(sample_run_config(seed, 0));
  if (!within_design_ranges(config))
    std::cerr << "note: configuration lies outside the Monte Carlo design ranges\n";
  Population pop = generate_population(config, derive_seed(config.stream_id, 1));
  for (const auto& w : pop.warnings) std::cerr << "warning: " << w << '\n';

  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "nodes.csv");
    write_node_table(out, pop);
  }
  {
    auto out = open_out(out_dir / "edges.tsv");
    out << "# " << describe(config) << '\n';
    write_edge_list(out, pop);
  }
  if (dump_matrix) {
    auto out = open_out(out_dir / "mixing.csv");
    apply_gamma(build_base_matrix(), config.gamma).write_csv(out);
  }
  std::cout << "# " << describe(config) << '\n';
  std::printf("N=%zu edges=%zu mean_degree=%.3f y=%.4f phi_y=%s phi_k=%s\n", pop.size(), pop.edges.size(),
              pop.mean_degree(), pop.prevalence(), opt_str(pop.phi_y).c_str(), opt_str(pop.phi_k).c_str());
  return 0;
}

int cmd_run(std::uint64_t seed, std::int64_t run_index, const ParamFlags& flags, const std::optional<fs::path>& out_dir) {
  const RunConfig config = flags.apply(sample_run_config(seed, run_index));
  if (!within_design_ranges(config))
    std::cerr << "note: configuration lies outside the Monte Carlo design ranges\n";
  const RunArtifacts run = execute_run_detailed(config);
  const RunResult& r = run.result;
  std::cout << "# " << describe(config) << '\n';
  std::printf("N=%lld edges=%lld y=%.4f phi_y=%s phi_k=%s golden: drawn=%lld kept=%lld estimate=%s\n",
              static_cast<long long>(r.population_size), static_cast<long long>(r.edge_count), r.y,
              opt_str(r.phi_y).c_str(), opt_str(r.phi_k).c_str(), static_cast<long long>(r.golden_drawn),
              static_cast<long long>(r.golden_size), opt_str(r.golden_estimate).c_str());
  for (Scenario s : kScenarios) {
    const ScenarioOutcome& o = r.at(s);
    const auto d = (o.estimate && o.seed_estimate) ? delta(r.y, *o.seed_estimate, *o.estimate) : std::nullopt;
    std::printf("  %-4s n0=%-6lld n=%-6lld y0=%s yhat=%s delta=%s stages=%zu\n", std::string(to_string(s)).c_str(),
                static_cast<long long>(o.n0), static_cast<long long>(o.n), opt_str(o.seed_estimate).c_str(),
                opt_str(o.estimate).c_str(), opt_str(d).c_str(),
                run.scenarios[index_of(s)].forest.stage_sizes().size());
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto res = open_out(*out_dir / "result.csv");
    write_results_header(res);
    write_results_row(res, r);
    auto forest = open_out(*out_dir / "forest.csv");
    std::vector<RecruitmentForest> forests;
    for (const auto& sr : run.scenarios) forests.push_back(sr.forest);
    write_forest_csv(forest, forests);
  }
  return 0;
}

int cmd_sweep(SweepManifest manifest, bool plot) {
  std::cerr << "sweep: " << manifest.n_runs << " runs, seed " << manifest.master_seed << ", " << manifest.parallelism
            << " workers -> " << manifest.output_dir.string() << '\n';
  const SweepOutcome outcome = execute_sweep(manifest, [](std::int64_t done, std::int64_t total) {
    std::fprintf(stderr, "\r  run %lld/%lld", static_cast<long long>(done), static_cast<long long>(total));
    if (done == total) std::fputc('\n', stderr);
  });
  if (outcome.resumed > 0) std::cerr << "resumed " << outcome.resumed << " completed runs\n";
  for (const RunError& e : outcome.errors) std::cerr << "run " << e.run_id << " failed: " << e.message << '\n';
  write_report_tables(outcome.report, manifest.output_dir);
  if (plot) write_plots(outcome.report, outcome.results, manifest.output_dir);
  std::cout << render_tables(outcome.report);
  return 0;
}

int cmd_report(const fs::path& results, const std::optional<fs::path>& out_dir, bool plot) {
  const auto runs = load_results(results);
  const EvaluationReport report = evaluate(runs);
  const fs::path dir = out_dir.value_or(results.parent_path().empty() ? fs::path(".") : results.parent_path());
  fs::create_directories(dir);
  write_text(dir / kReportFile, report_to_json(report).dump(2) + "\n");
  write_report_tables(report, dir);
  if (plot) write_plots(report, runs, dir);
  std::cout << render_tables(report);
  return 0;
}

int cmd_plot(const fs::path& results, const std::optional<fs::path>& out_dir) {
  const auto runs = load_results(results);
  const fs::path dir = out_dir.value_or(results.parent_path().empty() ? fs::path(".") : results.parent_path());
  for (const auto& p : write_plots(evaluate(runs), runs, dir)) std::cout << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cliques-and-blocks network generator and hybrid probabilistic-snowball sampling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  std::uint64_t seed = 1;
  std::optional<fs::path> out;
  ParamFlags params;

  auto* gen = app.add_subcommand("generate", "Generate one population and export node and edge tables");
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--out", out, "Output directory")->required();
  bool dump_matrix = false;
  gen->add_flag("--matrix", dump_matrix, "Also write the mixing matrix as mixing.csv");
  params.attach(gen);

  auto* run = app.add_subcommand("run", "Execute one run and print estimates for every scenario");
  std::int64_t run_index = 0;
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--run-index", run_index, "Run index under the master seed")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out, "Directory for result.csv and forest.csv");
  params.attach(run);

  auto* sweep = app.add_subcommand("sweep", "Execute a Monte Carlo sweep and report");
  std::optional<fs::path> config_path;
  std::optional<std::int64_t> runs;
  std::optional<int> parallelism;
  std::string scale = "desk";
  bool plot = false;
  sweep->add_option("--config", config_path, "Manifest JSON (master_seed, n_runs, parallelism, output_dir, scale)");
  sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--runs", runs, "Number of runs (overrides --scale)")->check(CLI::PositiveNumber);
  sweep->add_option("--parallelism", parallelism, "Worker threads (default: $HPSSD_PARALLELISM or all cores)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--scale", scale, "desk (500 runs) or paper (8000 runs)")
      ->check(CLI::IsMember({"desk", "paper"}));
  sweep->add_option("--out", out, "Output directory");
  sweep->add_flag("--plot", plot, "Write SVG plots next to the results");

  auto* report = app.add_subcommand("report", "Recompute the report from a results CSV");
  fs::path results;
  report->add_option("results", results, "Results CSV")->required();
  report->add_option("--out", out, "Output directory (default: next to the results)");
  report->add_flag("--plot", plot, "Also write SVG plots");

  auto* plotcmd = app.add_subcommand("plot", "Write SVG plots from a results CSV");
  plotcmd->add_option("results", results, "Results CSV")->required();
  plotcmd->add_option("--out", out, "Output directory (default: next to the results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(seed, params, *out, dump_matrix);
    if (*run) return cmd_run(seed, run_index, params, out);
    if (*sweep) {
      SweepManifest manifest;
      if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw ConfigError("cannot read manifest " + config_path->string());
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& ex) {
          throw ConfigError(std::string("malformed manifest: ") + ex.what());
        }
        manifest = manifest_from_json(doc);
      } else {
        manifest.n_runs = scale == "paper" ? kPaperRuns : kDeskRuns;
      }
      if (sweep->count("--seed")) manifest.master_seed = seed;
      if (runs) manifest.n_runs = *runs;
      else if (sweep->count("--scale")) manifest.n_runs = scale == "paper" ? kPaperRuns : kDeskRuns;
      if (parallelism) manifest.parallelism = *parallelism;
      else if (!config_path) manifest.parallelism = default_parallelism();
      if (out) manifest.output_dir = *out;
      return cmd_sweep(manifest, plot);
    }
    if (*report) return cmd_report(results, out, plot);
    if (*plotcmd) return cmd_plot(results, out);
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const DataError& ex) {
    std::cerr << "data error: " << ex.what() << '\n';
    return kExitData;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
