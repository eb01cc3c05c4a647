#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hpssd/evaluation.hpp"
#include "hpssd/harness.hpp"

namespace hpssd {

// Results CSV: one row per run. Undefined values are written as "NA";
// reals use %.17g so a write/read cycle is exact.
std::vector<std::string> results_columns();
void write_results_header(std::ostream& out);
void write_results_row(std::ostream& out, const RunResult& run);
// Throws DataError on a missing header, a wrong column count or an
// unparsable field. With `lenient`, malformed data rows are skipped.
std::vector<RunResult> read_results_csv(std::istream& in, bool lenient = false);

std::string csv_quote(std::string_view field);

// Writes through a temporary sibling and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

nlohmann::json manifest_to_json(const SweepManifest& manifest);
// Accepts master_seed, n_runs, parallelism, output_dir and
// scale ("desk" | "paper", used when n_runs is absent). Throws ConfigError.
SweepManifest manifest_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const EvaluationReport& report);

// One CSV per report table, written into `dir`; returns the paths written.
std::vector<std::filesystem::path> write_report_tables(const EvaluationReport& report,
                                                       const std::filesystem::path& dir);

}  // namespace hpssd
