#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpssd/config.hpp"
#include "hpssd/recruitment.hpp"

namespace hpssd {

struct ScenarioOutcome {
  std::optional<double> seed_estimate;  // mean y over the scenario's seeds
  std::optional<double> estimate;       // mean y over the hybrid sample
  std::int64_t n = 0;                   // hybrid sample size
  std::int64_t n0 = 0;                  // seed count

  bool operator==(const ScenarioOutcome&) const = default;
};

struct RunResult {
  RunConfig config;
  std::int64_t population_size = 0;
  std::int64_t edge_count = 0;
  double y = 0.0;  // population quota
  std::optional<double> phi_y;
  std::optional<double> phi_k;
  std::optional<double> golden_estimate;
  std::int64_t golden_drawn = 0;
  std::int64_t golden_size = 0;
  std::array<ScenarioOutcome, 4> scenarios{};

  const ScenarioOutcome& at(Scenario s) const { return scenarios[index_of(s)]; }
  ScenarioOutcome& at(Scenario s) { return scenarios[index_of(s)]; }
  bool operator==(const RunResult&) const = default;
};

// Random benchmark of a scenario: the mean over its stage 0 seeds. For I and
// II this is the golden sample, for III and IV the retained half.
const std::optional<double>& benchmark_estimate(const RunResult& run, Scenario scenario);

// (|y - benchmark| - |y - hpssd|) / y; positive when HPSSD had the smaller
// absolute error. Empty for y == 0.
std::optional<double> delta(double y, double benchmark, double hpssd);

// True when the run has a positive quota and both the benchmark and the
// scenario estimate. Only such runs enter the statistics below.
bool usable(const RunResult& run, Scenario scenario);

// Share of usable runs with |y - benchmark| > |y - scenario estimate|.
// `correction` is added to every scenario estimate (clamped to [0, 1]).
std::optional<double> zeta(std::span<const RunResult> runs, Scenario scenario, double correction = 0.0);

// 1 - s^2(y - scenario) / s^2(y - benchmark), sample variances across runs.
std::optional<double> psi(std::span<const RunResult> runs, Scenario scenario);

// mean(y - scenario estimate).
std::optional<double> bias_estimate(std::span<const RunResult> runs, Scenario scenario);

// estimate - offset, clamped to [0, 1].
double debias(double estimate, double offset);

// Additive correction that cancels a measured mean(y - estimate). A positive
// bias means the design underestimates, so the correction is added back.
double debias_correction(double bias);

struct Coefficient {
  double value = 0.0;
  double se = 0.0;
};

// OLS slope of z(err) on z(x) and its classical standard error. Empty for
// fewer than 3 points or a zero-variance variable.
std::optional<Coefficient> standardized_bivariate_regression(std::span<const double> x, std::span<const double> err);

struct MultivariateCheck {
  // Standardized slopes of delta on (n - n0), gamma and r_v.
  std::optional<std::array<Coefficient, 3>> slopes;
  std::string diagnostic;
};

// delta ~ a + b1 (n - n0) + b2 gamma + b3 r_v, all variables standardized.
MultivariateCheck multivariate_check(std::span<const RunResult> runs, Scenario scenario);

enum class Statistic { mean_delta, zeta, zeta_debiased };

inline constexpr std::array<const char*, 4> kQuartileNames = {"Low", "Mid-Low", "Mid-High", "High"};

struct QuartileBreakdown {
  std::array<std::optional<double>, 4> cells;
  std::optional<double> overall;
};

// Empirical 25/50/75 percentiles of gamma (linear interpolation between
// order statistics). Empty with fewer than 8 runs.
std::optional<std::array<double, 3>> gamma_cutpoints(std::span<const RunResult> runs);

// 0 = Low .. 3 = High.
int quartile_of(double gamma, const std::array<double, 3>& cutpoints);

// `bias` is only read for Statistic::zeta_debiased. Cells stay empty when
// there are fewer than 8 runs; `overall` is filled whenever defined.
QuartileBreakdown quartile_breakdown(std::span<const RunResult> runs, Statistic statistic, Scenario scenario,
                                     double bias = 0.0);

struct RegressionRow {
  std::string regressor;
  std::string concept_name;
  std::optional<Coefficient> coefficient;
};

// Standardized bivariate regressions of |y - scenario estimate| on the stage
// 0 estimate, gamma, w, r_v, target degree, y and N, in that order.
std::vector<RegressionRow> regression_table(std::span<const RunResult> runs, Scenario scenario);

struct ScenarioReport {
  Scenario scenario = Scenario::I;
  std::size_t runs_used = 0;
  QuartileBreakdown mean_delta;
  QuartileBreakdown zeta;
  QuartileBreakdown zeta_debiased;
  std::optional<double> psi;
  std::optional<double> bias;
  std::vector<RegressionRow> regressions;
  MultivariateCheck multivariate;
};

struct EvaluationReport {
  std::size_t n_runs = 0;
  std::optional<std::array<double, 3>> gamma_cutpoints;
  std::array<std::size_t, 4> quartile_sizes{};
  // Share of runs with phi_k > phi_y among runs where both are defined.
  std::optional<double> phi_k_above_phi_y;
  std::array<ScenarioReport, 4> scenarios;
};

// Every statistic above for all four scenarios. Runs are ordered by run_id
// first, so the report does not depend on input order.
EvaluationReport evaluate(std::span<const RunResult> runs);

}  // namespace hpssd
