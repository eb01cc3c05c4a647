// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.
//
// The sweep-level criteria share one 2,000-run sweep (master seed 1); the
// desk-scale criteria read its first 500 runs, which are exactly the runs
// a 500-run sweep with the same seed produces.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hpssd/distributions.hpp"
#include "hpssd/evaluation.hpp"
#include "hpssd/harness.hpp"
#include "hpssd/mixing.hpp"
#include "hpssd/netgen.hpp"
#include "hpssd/recruitment.hpp"
#include "oracles.hpp"

using namespace hpssd;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v) {
  std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string cells(const QuartileBreakdown& b, const char* f, double scale = 1.0) {
  std::string s;
  for (int q = 0; q < 4; ++q) {
    if (q) s += "/";
    s += b.cells[q] ? fmt(f, *b.cells[q] * scale) : "NA";
  }
  return s;
}

// 1
Verdict mixing_axioms() {
  Rng rng{derive_seed(1, 101)};
  const MixingMatrix base = build_base_matrix();
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    const double gamma = 0.2 + 0.6 * uniform01(rng);
    const MixingMatrix m = apply_gamma(base, gamma);
    ok += m.is_symmetric() && std::abs(m.grand_sum() - 1.0) <= 1e-12 && m.is_row_diagonal_dominant() &&
          m.has_decreasing_diagonal();
  }
  return {ok == 50, std::to_string(ok) + "/50 matrices satisfy all four axioms"};
}

// 2
Verdict distribution_moments() {
  constexpr int n = 1'000'000;
  Rng rng{derive_seed(1, 102)};
  double yule = 0.0, poisson = 0.0;
  for (int i = 0; i < n; ++i) yule += static_cast<double>(dist::sample_shifted_yule({3.0}, rng));
  for (int i = 0; i < n; ++i) poisson += static_cast<double>(dist::sample_poisson(0.5, rng));
  yule /= n;
  poisson /= n;
  double total = 0.0;
  for (int k = 0; k <= 10000; ++k) total += dist::yule_pmf(k, 3.0);
  const bool pass = std::abs(yule - 0.5) <= 0.01 && std::abs(poisson - 0.5) <= 0.005 && std::abs(total - 1.0) <= 1e-6;
  return {pass, "yule mean " + fmt("%.5f", yule) + ", poisson mean " + fmt("%.5f", poisson) + ", pmf sum " +
                    fmt("%.9f", total)};
}

// 3
Verdict branching_identity() {
  double ratio = 0.0;
  constexpr int runs = 50;
  for (int i = 0; i < runs; ++i) {
    RunConfig c = sample_run_config(3, i);
    c.r_v = 0.0;
    const RunResult r = execute_run(c);
    const auto& s = r.at(Scenario::I);
    ratio += static_cast<double>(s.n - s.n0) / static_cast<double>(s.n0);
  }
  ratio /= runs;
  return {ratio >= 0.85 && ratio <= 1.15, "mean snowball/seed ratio " + fmt("%.4f", ratio) + " (want [0.85, 1.15])"};
}

// 4
Verdict homophily_monotonicity(std::span<const RunResult> desk) {
  int higher = 0;
  for (int i = 0; i < 20; ++i) {
    RunConfig c = sample_run_config(4, i);
    const std::uint64_t seed = derive_seed(c.stream_id, 1);
    c.gamma = 0.2;
    const Population low = generate_population(c, seed);
    c.gamma = 0.8;
    const Population high = generate_population(c, seed);
    higher += low.phi_y && high.phi_y && *high.phi_y > *low.phi_y;
  }
  int k_above = 0, defined = 0;
  for (const RunResult& r : desk) {
    if (!r.phi_y || !r.phi_k) continue;
    ++defined;
    k_above += *r.phi_k > *r.phi_y;
  }
  const bool pass = higher >= 18 && 2 * k_above > defined;
  return {pass, "phi_y higher at gamma 0.8 in " + std::to_string(higher) + "/20 pairs; phi_k > phi_y in " +
                    std::to_string(k_above) + "/" + std::to_string(defined) + " desk runs"};
}

// 5
Verdict zeta_pattern(const EvaluationReport& desk) {
  const auto& z = desk.scenarios[index_of(Scenario::I)].zeta;
  bool pass = std::all_of(z.cells.begin(), z.cells.end(), [](const auto& c) { return c.has_value(); });
  if (pass) {
    for (int q = 0; q < 3; ++q) pass = pass && *z.cells[q] > *z.cells[q + 1];
    pass = pass && *z.cells[0] >= 0.44 && *z.cells[0] <= 0.60 && *z.cells[3] >= 0.21 && *z.cells[3] <= 0.37;
  }
  return {pass, "scenario I zeta by quartile " + cells(z, "%.3f") + " (strictly decreasing, Low in [0.44, 0.60], "
                "High in [0.21, 0.37])"};
}

// 6
Verdict bias_and_psi(const EvaluationReport& full) {
  bool pass = true;
  std::string detail;
  for (Scenario s : kScenarios) {
    const auto& r = full.scenarios[index_of(s)];
    const bool bias_ok = r.bias && *r.bias >= -0.02 && *r.bias <= -0.003;
    const bool psi_ok = r.psi && *r.psi > 0.0 && *r.psi < 0.01;
    pass = pass && bias_ok && psi_ok;
    detail += std::string(to_string(s)) + ": bias " + (r.bias ? fmt("%+.4f", *r.bias) : "NA") + " psi " +
              (r.psi ? fmt("%.4f", *r.psi) : "NA") + "; ";
  }
  return {pass, detail + "want bias in [-0.02, -0.003] and 0 < psi < 0.01"};
}

// 7
Verdict debiased_zeta(const EvaluationReport& full) {
  bool pass = true;
  std::string detail;
  for (Scenario s : kScenarios) {
    const auto& b = full.scenarios[index_of(s)].zeta_debiased;
    for (const auto& c : b.cells) pass = pass && c && *c > 0.5;
    detail += std::string(to_string(s)) + " " + cells(b, "%.3f") + "; ";
  }
  return {pass, detail + "want every cell > 0.5"};
}

// 8
Verdict regression_ordering(const EvaluationReport& full) {
  bool pass = true;
  std::string detail;
  for (Scenario s : kScenarios) {
    const auto& rows = full.scenarios[index_of(s)].regressions;
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& row : rows)
      if (row.coefficient) ranked.emplace_back(std::abs(row.coefficient->value), row.regressor);
    std::sort(ranked.begin(), ranked.end(), std::greater<>());
    const bool ok = ranked.size() >= 2 && ranked[0].second == "y0" && ranked[1].second == "gamma";
    pass = pass && ok;
    detail += std::string(to_string(s)) + " ";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
      for (const auto& row : rows)
        if (row.regressor == ranked[i].second) detail += row.regressor + fmt("=%+.3f ", row.coefficient->value);
    }
    detail += "; ";
  }
  return {pass, detail + "want |y0| first and |gamma| second"};
}

// 9
Verdict delta_signs(const EvaluationReport& full) {
  // Reference cells: Low quartile for III and IV, High quartile for all.
  struct Cell {
    Scenario s;
    int quartile;
    double reference;
  };
  const std::vector<Cell> ref = {{Scenario::III, 0, 0.0076},  {Scenario::IV, 0, 0.0075},  {Scenario::I, 3, -0.0173},
                                 {Scenario::II, 3, -0.0173}, {Scenario::III, 3, -0.0092}, {Scenario::IV, 3, -0.0092}};
  bool pass = true;
  std::string detail;
  for (const Cell& c : ref) {
    const auto& v = full.scenarios[index_of(c.s)].mean_delta.cells[c.quartile];
    const bool ok = v && (*v > 0) == (c.reference > 0) && *v != 0.0 && *v / c.reference >= 1.0 / 3.0 &&
                    *v / c.reference <= 3.0;
    pass = pass && ok;
    detail += std::string(to_string(c.s)) + "/" + kQuartileNames[c.quartile] + " " +
              (v ? fmt("%+.2f%%", *v * 100) : "NA") + "; ";
  }
  return {pass, detail + "want matching signs within a factor of 3 of the reference cells"};
}

// 10
Verdict oracle_equivalence() {
  Rng rng{derive_seed(1, 110)};
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 400; ++trial) {
    // A small random graph with outcomes.
    const int n = 3 + static_cast<int>(uniform_index(rng, 10));
    Population pop;
    pop.nodes.resize(static_cast<std::size_t>(n));
    std::vector<double> y(n), k(n, 0.0);
    for (int i = 0; i < n; ++i) {
      pop.nodes[i].id = i;
      pop.nodes[i].y = bernoulli(rng, 0.4);
      y[i] = pop.nodes[i].y;
    }
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (bernoulli(rng, 0.45)) pop.edges.push_back({a, b, EdgeKind::block});
    index_adjacency(pop);
    for (int i = 0; i < n; ++i) k[i] = pop.nodes[i].degree;

    for (const auto* values : {&y, &k}) {
      const auto got = edge_assortativity(pop.edges, *values);
      if (!got) continue;
      worst = std::max(worst, std::abs(*got - oracle::pearson_pairs(oracle::endpoint_table(pop.edges, *values))));
      ++checks;
    }

    // Sample-based run table over this graph.
    std::vector<RunResult> runs;
    const double quota = oracle::mean(y);
    if (quota == 0.0) continue;
    for (int r = 0; r < 6; ++r) {
      RunResult run;
      run.config.run_id = r;
      run.y = quota;
      for (auto& s : run.scenarios) {
        std::vector<std::int32_t> seeds, members;
        for (int i = 0; i < n; ++i) {
          if (bernoulli(rng, 0.5)) seeds.push_back(i);
          if (bernoulli(rng, 0.6)) members.push_back(i);
        }
        if (seeds.empty()) seeds.push_back(0);
        if (members.empty()) members.push_back(n - 1);
        s.seed_estimate = estimate_mean(pop, seeds);
        s.estimate = estimate_mean(pop, members);
        std::vector<double> ys;
        for (int id : members) ys.push_back(y[id]);
        worst = std::max(worst, std::abs(*s.estimate - oracle::mean(ys)));
        ++checks;
      }
      runs.push_back(run);
    }
    for (Scenario s : kScenarios) {
      double wins = 0.0;
      std::vector<double> e1, e0;
      for (const RunResult& r : runs) {
        wins += std::abs(r.y - *r.at(s).seed_estimate) > std::abs(r.y - *r.at(s).estimate);
        e1.push_back(r.y - *r.at(s).estimate);
        e0.push_back(r.y - *r.at(s).seed_estimate);
      }
      worst = std::max(worst, std::abs(*zeta(runs, s) - wins / static_cast<double>(runs.size())));
      worst = std::max(worst, std::abs(*bias_estimate(runs, s) - oracle::mean(e1)));
      checks += 2;
      const double v0 = oracle::pairwise_variance(e0);
      if (v0 > 0.0) {
        worst = std::max(worst, std::abs(*psi(runs, s) - (1.0 - oracle::pairwise_variance(e1) / v0)));
        ++checks;
      }
    }
  }
  return {worst <= 1e-10, std::to_string(checks) + " comparisons, largest deviation " + fmt("%.3g", worst)};
}

// 11
Verdict determinism(const fs::path& scratch) {
  auto sweep = [&](int parallelism) {
    SweepManifest m;
    m.master_seed = 11;
    m.n_runs = 16;
    m.parallelism = parallelism;
    m.output_dir = scratch / ("determinism_p" + std::to_string(parallelism));
    fs::remove_all(m.output_dir);
    execute_sweep(m);
    std::ifstream in(m.output_dir / kResultsFile, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string one = sweep(1), eight = sweep(8);
  const bool pass = !one.empty() && one == eight;
  return {pass, "16-run results at parallelism 1 and 8 are " + std::string(pass ? "byte-identical" : "different") +
                    " (" + std::to_string(one.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hpssd_acceptance";
  fs::create_directories(scratch);

  report(1, "mixing-matrix axioms", mixing_axioms());
  report(2, "distribution moments", distribution_moments());
  report(3, "subcritical branching", branching_identity());

  SweepManifest m;
  m.master_seed = 1;
  m.n_runs = 2000;
  m.parallelism = default_parallelism();
  m.output_dir = scratch / "sweep";
  fs::remove_all(m.output_dir);
  std::fprintf(stderr, "running a %lld-run sweep on %d worker(s)\n", static_cast<long long>(m.n_runs), m.parallelism);
  const SweepOutcome full = execute_sweep(m);
  if (!full.errors.empty()) std::fprintf(stderr, "%zu runs failed\n", full.errors.size());
  const std::span<const RunResult> desk_runs(full.results.data(),
                                             std::min<std::size_t>(kDeskRuns, full.results.size()));
  const EvaluationReport desk = evaluate(desk_runs);

  report(4, "homophily monotonicity", homophily_monotonicity(desk_runs));
  report(5, "zeta by homophily quartile (desk scale)", zeta_pattern(desk));
  report(6, "bias and variance reduction", bias_and_psi(full.report));
  report(7, "de-biased zeta", debiased_zeta(full.report));
  report(8, "regressor ordering", regression_ordering(full.report));
  report(9, "mean delta signs", delta_signs(full.report));
  report(10, "oracle equivalence", oracle_equivalence());
  report(11, "determinism across parallelism", determinism(scratch));

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
