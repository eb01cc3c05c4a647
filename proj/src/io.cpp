#include "hpssd/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hpssd/error.hpp"

namespace hpssd {
namespace {

constexpr const char* kNa = "NA";

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_real(*v) : kNa; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

double parse_real(const std::string& s, const char* column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw DataError(std::string("bad value '") + s + "' in " + column);
  return v;
}

std::optional<double> parse_opt(const std::string& s, const char* column) {
  if (s == kNa) return std::nullopt;
  return parse_real(s, column);
}

template <typename Int>
Int parse_int(const std::string& s, const char* column) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(std::string("bad integer '") + s + "' in " + column);
  return v;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json breakdown_json(const QuartileBreakdown& b) {
  nlohmann::json j;
  for (int q = 0; q < 4; ++q) j[kQuartileNames[q]] = opt_json(b.cells[q]);
  j["ALL"] = opt_json(b.overall);
  return j;
}

}  // namespace

std::vector<std::string> results_columns() {
  std::vector<std::string> cols = {"run_id", "master_seed", "stream_id", "p_D",     "omega_count", "target_mean_degree",
                                   "w",      "gamma",       "r_v",       "N",       "edges",       "y",
                                   "phi_y",  "phi_k",       "y_gold",    "gold_drawn", "gold_n"};
  for (Scenario s : kScenarios) {
    const std::string tag(to_string(s));
    for (const char* f : {"y0_", "yhat_", "n_", "n0_"}) cols.push_back(f + tag);
  }
  return cols;
}

void write_results_header(std::ostream& out) {
  const auto cols = results_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_results_row(std::ostream& out, const RunResult& r) {
  const RunConfig& c = r.config;
  std::ostringstream line;
  line << c.run_id << ',' << c.master_seed << ',' << c.stream_id << ',' << fmt_real(c.p_D) << ',' << c.omega_count
       << ',' << fmt_real(c.target_mean_degree) << ',' << fmt_real(c.w) << ',' << fmt_real(c.gamma) << ','
       << fmt_real(c.r_v) << ',' << r.population_size << ',' << r.edge_count << ',' << fmt_real(r.y) << ','
       << fmt_opt(r.phi_y) << ',' << fmt_opt(r.phi_k) << ',' << fmt_opt(r.golden_estimate) << ',' << r.golden_drawn
       << ',' << r.golden_size;
  for (const ScenarioOutcome& s : r.scenarios)
    line << ',' << fmt_opt(s.seed_estimate) << ',' << fmt_opt(s.estimate) << ',' << s.n << ',' << s.n0;
  line << '\n';
  out << line.str();
}

std::vector<RunResult> read_results_csv(std::istream& in, bool lenient) {
  const auto cols = results_columns();
  std::string line;
  if (!std::getline(in, line)) throw DataError("results file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (split(line) != cols) throw DataError("results file has an unexpected header");

  std::vector<RunResult> runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto f = split(line);
      if (f.size() != cols.size())
        throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols.size()) +
                        " fields, got " + std::to_string(f.size()));
      RunResult r;
      RunConfig& c = r.config;
      c.run_id = parse_int<std::int64_t>(f[0], "run_id");
      c.master_seed = parse_int<std::uint64_t>(f[1], "master_seed");
      c.stream_id = parse_int<std::uint64_t>(f[2], "stream_id");
      c.p_D = parse_real(f[3], "p_D");
      c.omega_count = parse_int<std::int32_t>(f[4], "omega_count");
      c.target_mean_degree = parse_real(f[5], "target_mean_degree");
      c.w = parse_real(f[6], "w");
      c.gamma = parse_real(f[7], "gamma");
      c.r_v = parse_real(f[8], "r_v");
      r.population_size = parse_int<std::int64_t>(f[9], "N");
      r.edge_count = parse_int<std::int64_t>(f[10], "edges");
      r.y = parse_real(f[11], "y");
      r.phi_y = parse_opt(f[12], "phi_y");
      r.phi_k = parse_opt(f[13], "phi_k");
      r.golden_estimate = parse_opt(f[14], "y_gold");
      r.golden_drawn = parse_int<std::int64_t>(f[15], "gold_drawn");
      r.golden_size = parse_int<std::int64_t>(f[16], "gold_n");
      std::size_t k = 17;
      for (ScenarioOutcome& s : r.scenarios) {
        s.seed_estimate = parse_opt(f[k++], "y0");
        s.estimate = parse_opt(f[k++], "yhat");
        s.n = parse_int<std::int64_t>(f[k++], "n");
        s.n0 = parse_int<std::int64_t>(f[k++], "n0");
      }
      runs.push_back(r);
    } catch (const DataError&) {
      if (!lenient) throw;
    }
  }
  return runs;
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json manifest_to_json(const SweepManifest& m) {
  return {{"master_seed", m.master_seed},
          {"n_runs", m.n_runs},
          {"parallelism", m.parallelism},
          {"output_dir", m.output_dir.string()},
          {"engine_version", m.engine_version}};
}

SweepManifest manifest_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("manifest must be a JSON object");
  SweepManifest m;
  try {
    if (doc.contains("master_seed")) {
      if (!doc.at("master_seed").is_number_unsigned()) throw ConfigError("manifest: master_seed must be a non-negative integer");
      m.master_seed = doc.at("master_seed").get<std::uint64_t>();
    }
    if (doc.contains("scale")) {
      const auto scale = doc.at("scale").get<std::string>();
      if (scale == "desk")
        m.n_runs = kDeskRuns;
      else if (scale == "paper")
        m.n_runs = kPaperRuns;
      else
        throw ConfigError("scale must be \"desk\" or \"paper\"");
    }
    if (doc.contains("n_runs")) m.n_runs = doc.at("n_runs").get<std::int64_t>();
    if (doc.contains("parallelism")) m.parallelism = doc.at("parallelism").get<int>();
    if (doc.contains("output_dir")) m.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed manifest: ") + ex.what());
  }
  if (m.n_runs < 1) throw ConfigError("manifest: n_runs must be at least 1");
  if (m.parallelism < 1) throw ConfigError("manifest: parallelism must be at least 1");
  return m;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json j;
  j["n_runs"] = report.n_runs;
  if (report.gamma_cutpoints)
    j["gamma_cutpoints"] = *report.gamma_cutpoints;
  else
    j["gamma_cutpoints"] = nullptr;
  j["quartile_sizes"] = report.quartile_sizes;
  j["phi_k_above_phi_y"] = opt_json(report.phi_k_above_phi_y);

  nlohmann::json scenarios = nlohmann::json::object();
  for (const ScenarioReport& s : report.scenarios) {
    nlohmann::json sj;
    sj["runs_used"] = s.runs_used;
    sj["mean_delta"] = breakdown_json(s.mean_delta);
    sj["zeta"] = breakdown_json(s.zeta);
    sj["zeta_debiased"] = breakdown_json(s.zeta_debiased);
    sj["psi"] = opt_json(s.psi);
    sj["bias"] = opt_json(s.bias);
    nlohmann::json rows = nlohmann::json::array();
    for (const RegressionRow& row : s.regressions) {
      nlohmann::json rj{{"regressor", row.regressor}, {"concept", row.concept_name}};
      rj["coefficient"] = row.coefficient ? nlohmann::json(row.coefficient->value) : nlohmann::json(nullptr);
      rj["se"] = row.coefficient ? nlohmann::json(row.coefficient->se) : nlohmann::json(nullptr);
      rows.push_back(rj);
    }
    sj["regressions"] = rows;
    nlohmann::json mv;
    if (s.multivariate.slopes) {
      const std::array<const char*, 3> names = {"n_minus_n0", "gamma", "r"};
      for (int k = 0; k < 3; ++k)
        mv[names[k]] = {{"coefficient", (*s.multivariate.slopes)[k].value}, {"se", (*s.multivariate.slopes)[k].se}};
    } else {
      mv = nullptr;
    }
    sj["multivariate"] = {{"slopes", mv}, {"diagnostic", s.multivariate.diagnostic}};
    scenarios[std::string(to_string(s.scenario))] = sj;
  }
  j["scenarios"] = scenarios;
  return j;
}

std::vector<std::filesystem::path> write_report_tables(const EvaluationReport& report,
                                                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir / name;
    write_file_atomically(path, body);
    written.push_back(path);
  };

  emit("regressions.csv", [&](std::ostream& out) {
    out << "regressor,concept,scenario,coefficient,se\n";
    for (const ScenarioReport& s : report.scenarios)
      for (const RegressionRow& row : s.regressions)
        out << row.regressor << ',' << csv_quote(row.concept_name) << ',' << to_string(s.scenario) << ','
            << (row.coefficient ? fmt_real(row.coefficient->value) : kNa) << ','
            << (row.coefficient ? fmt_real(row.coefficient->se) : kNa) << '\n';
  });

  auto quartile_table = [&](const char* name, QuartileBreakdown ScenarioReport::*member) {
    emit(name, [&](std::ostream& out) {
      out << "homophily,I,II,III,IV\n";
      for (int q = 0; q <= 4; ++q) {
        out << (q < 4 ? kQuartileNames[q] : "ALL");
        for (const ScenarioReport& s : report.scenarios) {
          const QuartileBreakdown& b = s.*member;
          out << ',' << fmt_opt(q < 4 ? b.cells[q] : b.overall);
        }
        out << '\n';
      }
    });
  };
  quartile_table("mean_delta.csv", &ScenarioReport::mean_delta);
  quartile_table("zeta.csv", &ScenarioReport::zeta);
  quartile_table("zeta_debiased.csv", &ScenarioReport::zeta_debiased);

  emit("psi_bias.csv", [&](std::ostream& out) {
    out << "statistic,I,II,III,IV\npsi";
    for (const ScenarioReport& s : report.scenarios) out << ',' << fmt_opt(s.psi);
    out << "\nbias";
    for (const ScenarioReport& s : report.scenarios) out << ',' << fmt_opt(s.bias);
    out << '\n';
  });

  emit("multivariate.csv", [&](std::ostream& out) {
    out << "scenario,term,coefficient,se\n";
    const std::array<const char*, 3> names = {"n_minus_n0", "gamma", "r"};
    for (const ScenarioReport& s : report.scenarios)
      for (int k = 0; k < 3; ++k) {
        out << to_string(s.scenario) << ',' << names[k] << ',';
        if (s.multivariate.slopes)
          out << fmt_real((*s.multivariate.slopes)[k].value) << ',' << fmt_real((*s.multivariate.slopes)[k].se);
        else
          out << kNa << ',' << kNa;
        out << '\n';
      }
  });
  return written;
}

}  // namespace hpssd
