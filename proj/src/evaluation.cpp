#include "hpssd/evaluation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace hpssd {
namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample variance, two-pass.
double variance_of(std::span<const double> v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

std::optional<std::vector<double>> standardized(std::span<const double> v) {
  const double m = mean_of(v);
  const double sd = std::sqrt(variance_of(v));
  if (!(sd > 0.0) || !std::isfinite(sd)) return std::nullopt;
  std::vector<double> z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - m) / sd;
  return z;
}

std::vector<const RunResult*> usable_runs(std::span<const RunResult> runs, Scenario scenario) {
  std::vector<const RunResult*> out;
  for (const RunResult& r : runs)
    if (usable(r, scenario)) out.push_back(&r);
  return out;
}

bool hpssd_wins(const RunResult& r, Scenario s, double correction) {
  const double est = debias(*r.at(s).estimate, -correction);
  return std::abs(r.y - *benchmark_estimate(r, s)) > std::abs(r.y - est);
}

std::optional<double> statistic_over(std::span<const RunResult* const> runs, Statistic statistic, Scenario s,
                                     double correction) {
  if (runs.empty()) return std::nullopt;
  double acc = 0.0;
  for (const RunResult* r : runs) {
    if (statistic == Statistic::mean_delta)
      acc += *delta(r->y, *benchmark_estimate(*r, s), *r->at(s).estimate);
    else
      acc += hpssd_wins(*r, s, correction) ? 1.0 : 0.0;
  }
  return acc / static_cast<double>(runs.size());
}

}  // namespace

const std::optional<double>& benchmark_estimate(const RunResult& run, Scenario scenario) {
  return run.at(scenario).seed_estimate;
}

std::optional<double> delta(double y, double benchmark, double hpssd) {
  if (y == 0.0) return std::nullopt;
  return (std::abs(y - benchmark) - std::abs(y - hpssd)) / y;
}

bool usable(const RunResult& run, Scenario scenario) {
  return run.y > 0.0 && benchmark_estimate(run, scenario).has_value() && run.at(scenario).estimate.has_value();
}

std::optional<double> zeta(std::span<const RunResult> runs, Scenario scenario, double correction) {
  const auto used = usable_runs(runs, scenario);
  return statistic_over(used, Statistic::zeta, scenario, correction);
}

std::optional<double> psi(std::span<const RunResult> runs, Scenario scenario) {
  const auto used = usable_runs(runs, scenario);
  if (used.size() < 2) return std::nullopt;
  std::vector<double> hpssd_err, bench_err;
  for (const RunResult* r : used) {
    hpssd_err.push_back(r->y - *r->at(scenario).estimate);
    bench_err.push_back(r->y - *benchmark_estimate(*r, scenario));
  }
  const double bench_var = variance_of(bench_err);
  if (!(bench_var > 0.0)) return std::nullopt;
  return 1.0 - variance_of(hpssd_err) / bench_var;
}

std::optional<double> bias_estimate(std::span<const RunResult> runs, Scenario scenario) {
  const auto used = usable_runs(runs, scenario);
  if (used.empty()) return std::nullopt;
  double acc = 0.0;
  for (const RunResult* r : used) acc += r->y - *r->at(scenario).estimate;
  return acc / static_cast<double>(used.size());
}

double debias_correction(double bias) { return bias; }

double debias(double estimate, double offset) { return std::clamp(estimate - offset, 0.0, 1.0); }

std::optional<Coefficient> standardized_bivariate_regression(std::span<const double> x, std::span<const double> err) {
  if (x.size() != err.size() || x.size() < 3) return std::nullopt;
  const auto zx = standardized(x);
  const auto zy = standardized(err);
  if (!zx || !zy) return std::nullopt;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (*zx)[i] * (*zx)[i];
    sxy += (*zx)[i] * (*zy)[i];
  }
  const double slope = sxy / sxx;
  // Both variables are centred, so the fitted intercept is zero.
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double resid = (*zy)[i] - slope * (*zx)[i];
    rss += resid * resid;
  }
  const double n = static_cast<double>(x.size());
  return Coefficient{slope, std::sqrt(rss / (n - 2.0) / sxx)};
}

MultivariateCheck multivariate_check(std::span<const RunResult> runs, Scenario scenario) {
  MultivariateCheck check;
  const auto used = usable_runs(runs, scenario);
  if (used.size() < 5) {
    check.diagnostic = "need at least 5 usable runs, have " + std::to_string(used.size());
    return check;
  }
  const std::size_t n = used.size();
  std::vector<double> d(n), growth(n), gamma(n), attrition(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RunResult& r = *used[i];
    d[i] = *delta(r.y, *benchmark_estimate(r, scenario), *r.at(scenario).estimate);
    growth[i] = static_cast<double>(r.at(scenario).n - r.at(scenario).n0);
    gamma[i] = r.config.gamma;
    attrition[i] = r.config.r_v;
  }

  const std::array<std::vector<double>*, 3> regressors = {&growth, &gamma, &attrition};
  const std::array<const char*, 3> names = {"n - n0", "gamma", "r"};
  Eigen::MatrixXd X(n, 4);
  X.col(0).setOnes();
  for (int j = 0; j < 3; ++j) {
    const auto z = standardized(*regressors[j]);
    if (!z) {
      check.diagnostic = std::string("regressor '") + names[j] + "' has zero variance";
      return check;
    }
    X.col(j + 1) = Eigen::Map<const Eigen::VectorXd>(z->data(), static_cast<Eigen::Index>(n));
  }

  const auto zd = standardized(d);
  if (!zd) {
    // Constant response: every slope is exactly zero.
    check.slopes = std::array<Coefficient, 3>{};
    check.diagnostic = "constant response";
    return check;
  }
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(zd->data(), static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4 || n <= 4) {
    check.diagnostic = "rank-deficient design (rank " + std::to_string(qr.rank()) + " of 4)";
    return check;
  }
  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd resid = yv - X * beta;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(n - 4);
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();

  std::array<Coefficient, 3> slopes{};
  for (int j = 0; j < 3; ++j) slopes[j] = {beta(j + 1), std::sqrt(sigma2 * xtx_inv(j + 1, j + 1))};
  check.slopes = slopes;
  return check;
}

std::optional<std::array<double, 3>> gamma_cutpoints(std::span<const RunResult> runs) {
  if (runs.size() < 8) return std::nullopt;
  std::vector<double> g;
  g.reserve(runs.size());
  for (const RunResult& r : runs) g.push_back(r.config.gamma);
  std::sort(g.begin(), g.end());
  std::array<double, 3> cut{};
  for (int q = 1; q <= 3; ++q) {
    const double pos = 0.25 * q * static_cast<double>(g.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, g.size() - 1);
    cut[q - 1] = g[lo] + (pos - static_cast<double>(lo)) * (g[hi] - g[lo]);
  }
  return cut;
}

int quartile_of(double gamma, const std::array<double, 3>& cutpoints) {
  int q = 0;
  while (q < 3 && gamma > cutpoints[q]) ++q;
  return q;
}

QuartileBreakdown quartile_breakdown(std::span<const RunResult> runs, Statistic statistic, Scenario scenario,
                                     double bias) {
  const double correction = statistic == Statistic::zeta_debiased ? debias_correction(bias) : 0.0;
  QuartileBreakdown out;
  const auto used = usable_runs(runs, scenario);
  out.overall = statistic_over(used, statistic, scenario, correction);

  const auto cut = gamma_cutpoints(runs);
  if (!cut) return out;
  std::array<std::vector<const RunResult*>, 4> groups;
  for (const RunResult* r : used) groups[quartile_of(r->config.gamma, *cut)].push_back(r);
  for (int q = 0; q < 4; ++q) out.cells[q] = statistic_over(groups[q], statistic, scenario, correction);
  return out;
}

std::vector<RegressionRow> regression_table(std::span<const RunResult> runs, Scenario scenario) {
  const auto used = usable_runs(runs, scenario);
  struct Regressor {
    const char* name;
    const char* concept_name;
    double (*get)(const RunResult&, Scenario);
  };
  static const std::array<Regressor, 7> regressors = {{
      {"y0", "Stage 0",
       [](const RunResult& r, Scenario s) { return r.at(s).seed_estimate.value_or(std::nan("")); }},
      {"gamma", "Homophily", [](const RunResult& r, Scenario) { return r.config.gamma; }},
      {"w", "Familism", [](const RunResult& r, Scenario) { return r.config.w; }},
      {"r", "Attrition", [](const RunResult& r, Scenario) { return r.config.r_v; }},
      {"k", "Ego-nets size", [](const RunResult& r, Scenario) { return r.config.target_mean_degree; }},
      {"y", "Target Quota", [](const RunResult& r, Scenario) { return r.y; }},
      {"N", "Pop. Size", [](const RunResult& r, Scenario) { return static_cast<double>(r.population_size); }},
  }};

  std::vector<RegressionRow> rows;
  for (const Regressor& reg : regressors) {
    std::vector<double> x, err;
    for (const RunResult* r : used) {
      const double v = reg.get(*r, scenario);
      if (std::isnan(v)) continue;
      x.push_back(v);
      err.push_back(std::abs(r->y - *r->at(scenario).estimate));
    }
    rows.push_back({reg.name, reg.concept_name, standardized_bivariate_regression(x, err)});
  }
  return rows;
}

EvaluationReport evaluate(std::span<const RunResult> input) {
  std::vector<RunResult> runs(input.begin(), input.end());
  std::sort(runs.begin(), runs.end(),
            [](const RunResult& a, const RunResult& b) { return a.config.run_id < b.config.run_id; });

  EvaluationReport report;
  report.n_runs = runs.size();
  report.gamma_cutpoints = gamma_cutpoints(runs);
  if (report.gamma_cutpoints)
    for (const RunResult& r : runs) ++report.quartile_sizes[quartile_of(r.config.gamma, *report.gamma_cutpoints)];

  std::size_t both = 0, above = 0;
  for (const RunResult& r : runs)
    if (r.phi_y && r.phi_k) {
      ++both;
      if (*r.phi_k > *r.phi_y) ++above;
    }
  if (both > 0) report.phi_k_above_phi_y = static_cast<double>(above) / static_cast<double>(both);

  for (Scenario s : kScenarios) {
    ScenarioReport& sr = report.scenarios[index_of(s)];
    sr.scenario = s;
    sr.runs_used = usable_runs(runs, s).size();
    sr.mean_delta = quartile_breakdown(runs, Statistic::mean_delta, s);
    sr.zeta = quartile_breakdown(runs, Statistic::zeta, s);
    sr.psi = psi(runs, s);
    sr.bias = bias_estimate(runs, s);
    if (sr.bias) sr.zeta_debiased = quartile_breakdown(runs, Statistic::zeta_debiased, s, *sr.bias);
    sr.regressions = regression_table(runs, s);
    sr.multivariate = multivariate_check(runs, s);
  }
  return report;
}

}  // namespace hpssd
