#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hpssd/config.hpp"
#include "hpssd/evaluation.hpp"
#include "hpssd/netgen.hpp"
#include "hpssd/recruitment.hpp"

namespace hpssd {

inline constexpr const char* kEngineVersion = "hpssd-sim 1.0.0";

inline constexpr std::int64_t kDeskRuns = 500;
inline constexpr std::int64_t kPaperRuns = 8000;

// All six parameters drawn uniformly from the design ranges using a
// substream keyed by (master_seed, run_index).
RunConfig sample_run_config(std::uint64_t master_seed, std::int64_t run_index);

// Everything one run produces, for callers that want more than the summary.
struct RunArtifacts {
  Population population;
  ScenarioSample golden;
  std::array<ScenarioRun, 4> scenarios;
  RunResult result;
};

// generate -> attrition -> golden sample -> four scenarios. Every stage
// draws from its own substream of config.stream_id.
RunArtifacts execute_run_detailed(const RunConfig& config);
RunResult execute_run(const RunConfig& config);

// Assembles the summary row from a run's artifacts.
RunResult summarize(const Population& population, const ScenarioSample& golden,
                    const std::array<ScenarioRun, 4>& scenarios);

struct SweepManifest {
  std::uint64_t master_seed = 1;
  std::int64_t n_runs = kDeskRuns;
  int parallelism = 1;
  std::filesystem::path output_dir = "sweep_out";
  std::string engine_version = kEngineVersion;
};

struct RunError {
  std::int64_t run_id = 0;
  std::string message;
};

struct SweepOutcome {
  std::vector<RunResult> results;  // sorted by run_id
  std::vector<RunError> errors;
  std::int64_t resumed = 0;        // rows taken from an existing results file
  EvaluationReport report;
};

using ProgressFn = std::function<void(std::int64_t done, std::int64_t total)>;

// File names inside SweepManifest::output_dir.
inline constexpr const char* kResultsFile = "results.csv";
inline constexpr const char* kErrorsFile = "errors.csv";
inline constexpr const char* kManifestEcho = "manifest.json";
inline constexpr const char* kReportFile = "report.json";

// Runs every run_id in [0, n_runs) on a pool of `parallelism` workers,
// skipping run_ids already present in an existing results file. Results
// are appended as they finish and rewritten sorted at the end. Throws
// std::runtime_error only on I/O failure; failed runs become RunError rows.
SweepOutcome execute_sweep(const SweepManifest& manifest, const ProgressFn& progress = {});

// Default worker count: HPSSD_PARALLELISM if set, else hardware concurrency.
int default_parallelism();

}  // namespace hpssd
