#include "hpssd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <type_traits>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "hpssd/error.hpp"
#include "hpssd/io.hpp"

namespace hpssd {
namespace {

// Substream counters under a run's stream_id.
enum RunStream : std::uint64_t { kPopulation = 1, kAttrition = 2, kGolden = 3, kScenarioBase = 10 };

template <typename T>
T uniform_between(Rng& rng, T lo, T hi) {
  if constexpr (std::is_integral_v<T>)
    return std::uniform_int_distribution<T>(lo, hi)(rng);
  else
    return std::uniform_real_distribution<T>(lo, hi)(rng);
}

}  // namespace

bool within_design_ranges(const RunConfig& c) {
  using namespace ranges;
  return c.p_D >= kPdMin && c.p_D <= kPdMax && c.omega_count >= kOmegaMin && c.omega_count <= kOmegaMax &&
         c.target_mean_degree >= kDegreeMin && c.target_mean_degree <= kDegreeMax && c.w >= kWMin &&
         c.w <= kWMax && c.gamma >= kGammaMin && c.gamma <= kGammaMax && c.r_v >= kRvMin && c.r_v <= kRvMax;
}

std::string validate(const RunConfig& c) {
  if (!(c.p_D >= 0.0 && c.p_D <= 1.0)) return "p_D must lie in [0, 1]";
  if (c.omega_count < 1) return "omega_count must be at least 1";
  if (!(c.target_mean_degree >= 0.0) || !std::isfinite(c.target_mean_degree))
    return "target_mean_degree must be non-negative";
  if (!(c.w >= 0.0 && c.w <= 1.0)) return "w must lie in [0, 1]";
  if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) return "gamma must be positive";
  if (!(c.r_v >= 0.0 && c.r_v < 1.0)) return "r_v must lie in [0, 1)";
  return {};
}

RunConfig sample_run_config(std::uint64_t master_seed, std::int64_t run_index) {
  using namespace ranges;
  const std::uint64_t key = derive_seed(master_seed, static_cast<std::uint64_t>(run_index));
  Rng rng = make_rng(key, 0);
  RunConfig c;
  c.run_id = run_index;
  c.master_seed = master_seed;
  c.stream_id = derive_seed(key, 1);
  c.p_D = uniform_between(rng, kPdMin, kPdMax);
  c.omega_count = uniform_between(rng, kOmegaMin, kOmegaMax);
  c.target_mean_degree = uniform_between(rng, kDegreeMin, kDegreeMax);
  c.w = uniform_between(rng, kWMin, kWMax);
  c.gamma = uniform_between(rng, kGammaMin, kGammaMax);
  c.r_v = uniform_between(rng, kRvMin, kRvMax);
  return c;
}

RunResult summarize(const Population& population, const ScenarioSample& golden,
                    const std::array<ScenarioRun, 4>& scenarios) {
  RunResult r;
  r.config = population.config;
  r.population_size = static_cast<std::int64_t>(population.size());
  r.edge_count = static_cast<std::int64_t>(population.edges.size());
  r.y = population.prevalence();
  r.phi_y = population.phi_y;
  r.phi_k = population.phi_k;
  r.golden_estimate = golden.estimate;
  r.golden_drawn = golden.drawn;
  r.golden_size = static_cast<std::int64_t>(golden.members.size());
  for (Scenario s : kScenarios) {
    const ScenarioRun& run = scenarios[index_of(s)];
    ScenarioOutcome& out = r.at(s);
    out.seed_estimate = estimate_mean(population, run.sample.seeds);
    out.estimate = run.sample.estimate;
    out.n = static_cast<std::int64_t>(run.sample.members.size());
    out.n0 = static_cast<std::int64_t>(run.sample.seeds.size());
  }
  return r;
}

RunArtifacts execute_run_detailed(const RunConfig& config) {
  RunArtifacts a;
  a.population = generate_population(config, derive_seed(config.stream_id, kPopulation));
  Rng attrition_rng = make_rng(config.stream_id, kAttrition);
  assign_attrition(a.population, config.r_v, attrition_rng);
  Rng golden_rng = make_rng(config.stream_id, kGolden);
  a.golden = draw_golden_sample(a.population, golden_rng);
  for (Scenario s : kScenarios) {
    Rng rng = make_rng(config.stream_id, kScenarioBase + index_of(s));
    a.scenarios[index_of(s)] = run_scenario(a.population, a.golden, s, rng);
  }
  a.result = summarize(a.population, a.golden, a.scenarios);
  return a;
}

RunResult execute_run(const RunConfig& config) { return execute_run_detailed(config).result; }

int default_parallelism() {
  if (const char* env = std::getenv("HPSSD_PARALLELISM")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepOutcome execute_sweep(const SweepManifest& manifest, const ProgressFn& progress) {
  namespace fs = std::filesystem;
  if (manifest.n_runs < 1) throw ConfigError("sweep needs at least one run");
  fs::create_directories(manifest.output_dir);
  const fs::path results_path = manifest.output_dir / kResultsFile;

  SweepOutcome outcome;
  std::set<std::int64_t> done;
  if (fs::exists(results_path)) {
    std::ifstream in(results_path);
    for (RunResult& r : read_results_csv(in, /*lenient=*/true)) {
      if (r.config.run_id < 0 || r.config.run_id >= manifest.n_runs) continue;
      if (r.config.master_seed != manifest.master_seed) continue;
      if (!done.insert(r.config.run_id).second) continue;
      outcome.results.push_back(std::move(r));
    }
  }
  outcome.resumed = static_cast<std::int64_t>(outcome.results.size());

  std::vector<std::int64_t> pending;
  for (std::int64_t i = 0; i < manifest.n_runs; ++i)
    if (!done.count(i)) pending.push_back(i);

  // Rewrite what survived the resume so the streamed file stays well formed.
  {
    std::ofstream out(results_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + results_path.string());
    write_results_header(out);
    for (const RunResult& r : outcome.results) write_results_row(out, r);
  }

  std::ofstream sink(results_path, std::ios::app);
  if (!sink) throw std::runtime_error("cannot append to " + results_path.string());
  std::mutex sink_mutex;
  std::atomic<std::size_t> cursor{0};
  std::atomic<std::int64_t> finished{0};
  bool io_failed = false;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= pending.size()) return;
      const RunConfig config = sample_run_config(manifest.master_seed, pending[k]);
      RunResult result;
      std::string error;
      try {
        result = execute_run(config);
      } catch (const std::exception& ex) {
        error = ex.what();
      }
      {
        std::lock_guard lock(sink_mutex);
        if (error.empty()) {
          write_results_row(sink, result);
          sink.flush();
          if (!sink) io_failed = true;
          outcome.results.push_back(std::move(result));
        } else {
          outcome.errors.push_back({config.run_id, error});
        }
        const auto n = ++finished;
        if (progress) progress(n, static_cast<std::int64_t>(pending.size()));
      }
    }
  };

  const int workers = std::clamp<int>(manifest.parallelism, 1, std::max<int>(1, static_cast<int>(pending.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  sink.close();
  if (io_failed) throw std::runtime_error("write to " + results_path.string() + " failed");

  std::sort(outcome.results.begin(), outcome.results.end(),
            [](const RunResult& a, const RunResult& b) { return a.config.run_id < b.config.run_id; });
  std::sort(outcome.errors.begin(), outcome.errors.end(),
            [](const RunError& a, const RunError& b) { return a.run_id < b.run_id; });

  write_file_atomically(results_path, [&](std::ostream& out) {
    write_results_header(out);
    for (const RunResult& r : outcome.results) write_results_row(out, r);
  });
  const fs::path errors_path = manifest.output_dir / kErrorsFile;
  if (!outcome.errors.empty()) {
    write_file_atomically(errors_path, [&](std::ostream& out) {
      out << "run_id,message\n";
      for (const RunError& e : outcome.errors) out << e.run_id << ',' << csv_quote(e.message) << '\n';
    });
  } else if (fs::exists(errors_path)) {
    fs::remove(errors_path);
  }
  write_file_atomically(manifest.output_dir / kManifestEcho,
                        [&](std::ostream& out) { out << manifest_to_json(manifest).dump(2) << '\n'; });

  outcome.report = evaluate(outcome.results);
  write_file_atomically(manifest.output_dir / kReportFile,
                        [&](std::ostream& out) { out << report_to_json(outcome.report).dump(2) << '\n'; });
  return outcome;
}

}  // namespace hpssd
