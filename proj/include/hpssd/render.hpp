#pragma once

#include <span>
#include <string>

#include "hpssd/evaluation.hpp"

namespace hpssd {

// Fixed-width text rendering of the report: regressions, mean delta, zeta,
// psi/bias, de-biased zeta and the multivariate check.
std::string render_tables(const EvaluationReport& report);

// Grouped bar chart of a per-quartile statistic for the four scenarios.
std::string svg_quartile_bars(const EvaluationReport& report, Statistic statistic);

// Hexagonal-bin density of (phi_y, phi_k) across runs.
std::string svg_phi_density(std::span<const RunResult> runs);

}  // namespace hpssd
