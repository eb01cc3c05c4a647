#include "hpssd/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace hpssd {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string cell(const std::optional<double>& v, const char* pattern, double scale = 1.0) {
  return v ? fmt(pattern, *v * scale) : std::string("NA");
}

void pad_row(std::ostringstream& out, const std::string& label, const std::array<std::string, 4>& cells,
             int label_width = 14, int width = 16) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-*s", label_width, label.c_str());
  out << buf;
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%*s", width, c.c_str());
    out << buf;
  }
  out << '\n';
}

void scenario_header(std::ostringstream& out, const char* first) { pad_row(out, first, {"I", "II", "III", "IV"}); }

void quartile_block(std::ostringstream& out, const EvaluationReport& report, const char* title,
                    QuartileBreakdown ScenarioReport::*member, const char* pattern, double scale, bool with_all) {
  out << title << '\n';
  scenario_header(out, "Homophily");
  for (int q = 0; q < (with_all ? 5 : 4); ++q) {
    std::array<std::string, 4> cells;
    for (int s = 0; s < 4; ++s) {
      const QuartileBreakdown& b = report.scenarios[s].*member;
      cells[s] = cell(q < 4 ? b.cells[q] : b.overall, pattern, scale);
    }
    pad_row(out, q < 4 ? kQuartileNames[q] : "ALL", cells);
  }
  out << '\n';
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

}  // namespace

std::string render_tables(const EvaluationReport& report) {
  std::ostringstream out;
  out << "Runs: " << report.n_runs;
  if (report.gamma_cutpoints)
    out << "   gamma quartile cutpoints: " << fmt("%.4f", (*report.gamma_cutpoints)[0]) << " / "
        << fmt("%.4f", (*report.gamma_cutpoints)[1]) << " / " << fmt("%.4f", (*report.gamma_cutpoints)[2]);
  out << "\n\n";

  out << "Standardized bivariate regressions on the absolute error\n";
  scenario_header(out, "Regressor");
  if (!report.scenarios[0].regressions.empty()) {
    for (std::size_t k = 0; k < report.scenarios[0].regressions.size(); ++k) {
      std::array<std::string, 4> cells;
      for (int s = 0; s < 4; ++s) {
        const auto& row = report.scenarios[s].regressions[k];
        cells[s] = row.coefficient ? fmt("%.3f", row.coefficient->value) + fmt("+-%.3f", row.coefficient->se)
                                   : std::string("NA");
      }
      pad_row(out, report.scenarios[0].regressions[k].regressor, cells);
    }
  }
  out << '\n';

  quartile_block(out, report, "Average improvement in the margin of error (mean delta x 100, %)",
                 &ScenarioReport::mean_delta, "%.2f%%", 100.0, true);
  quartile_block(out, report, "Share of runs where the random benchmark has the larger absolute error (zeta)",
                 &ScenarioReport::zeta, "%.2f", 1.0, false);

  out << "Reduction of variance and estimate of bias\n";
  scenario_header(out, "");
  std::array<std::string, 4> psi_cells, bias_cells;
  for (int s = 0; s < 4; ++s) {
    psi_cells[s] = cell(report.scenarios[s].psi, "%.2f%%", 100.0);
    bias_cells[s] = cell(report.scenarios[s].bias, "%.4f");
  }
  pad_row(out, "psi", psi_cells);
  pad_row(out, "bias", bias_cells);
  out << '\n';

  quartile_block(out, report, "Zeta after removing the sweep-level bias", &ScenarioReport::zeta_debiased, "%.2f", 1.0,
                 false);

  out << "Multivariate check: delta ~ a + b1 (n - n0) + b2 gamma + b3 r\n";
  scenario_header(out, "Term");
  const std::array<const char*, 3> terms = {"b1 n-n0", "b2 gamma", "b3 r"};
  for (int k = 0; k < 3; ++k) {
    std::array<std::string, 4> cells;
    for (int s = 0; s < 4; ++s) {
      const auto& mv = report.scenarios[s].multivariate;
      cells[s] = mv.slopes ? fmt("%.3f", (*mv.slopes)[k].value) + fmt("+-%.3f", (*mv.slopes)[k].se) : "NA";
    }
    pad_row(out, terms[k], cells);
  }
  if (report.phi_k_above_phi_y) out << "\nShare of runs with phi_k > phi_y: " << fmt("%.3f", *report.phi_k_above_phi_y);
  out << '\n';
  return out.str();
}

std::string svg_quartile_bars(const EvaluationReport& report, Statistic statistic) {
  const double scale = statistic == Statistic::mean_delta ? 100.0 : 1.0;
  const char* title = statistic == Statistic::mean_delta ? "Mean delta x 100 by homophily quartile"
                      : statistic == Statistic::zeta ? "Zeta by homophily quartile"
                                                     : "De-biased zeta by homophily quartile";
  auto member = statistic == Statistic::mean_delta ? &ScenarioReport::mean_delta
                : statistic == Statistic::zeta     ? &ScenarioReport::zeta
                                                   : &ScenarioReport::zeta_debiased;

  double lo = 0.0, hi = 0.0;
  for (const ScenarioReport& s : report.scenarios)
    for (const auto& v : (s.*member).cells)
      if (v) {
        lo = std::min(lo, *v * scale);
        hi = std::max(hi, *v * scale);
      }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  const double pad = 0.1 * (hi - lo);
  lo = lo < 0.0 ? lo - pad : lo;
  hi += pad;

  const double width = 640, height = 360, left = 60, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto ypos = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
  const std::array<const char*, 4> colours = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << escape(title) << "</text>\n";
  svg << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << ypos(0.0) << "\" y2=\"" << ypos(0.0)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << ypos(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.3g", v) << "</text>\n";
  }
  const double group_w = plot_w / 4.0;
  const double bar_w = group_w / 5.0;
  for (int q = 0; q < 4; ++q) {
    const double gx = left + q * group_w;
    for (int s = 0; s < 4; ++s) {
      const auto& v = (report.scenarios[s].*member).cells[q];
      if (!v) continue;
      const double y0 = ypos(0.0), y1 = ypos(*v * scale);
      svg << "<rect x=\"" << gx + (s + 0.5) * bar_w << "\" y=\"" << std::min(y0, y1) << "\" width=\"" << bar_w * 0.9
          << "\" height=\"" << std::abs(y1 - y0) << "\" fill=\"" << colours[s] << "\"/>\n";
    }
    svg << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << kQuartileNames[q]
        << "</text>\n";
  }
  for (int s = 0; s < 4; ++s) {
    const double lx = left + s * 70;
    svg << "<rect x=\"" << lx << "\" y=\"" << height - 18 << "\" width=\"10\" height=\"10\" fill=\"" << colours[s]
        << "\"/><text x=\"" << lx + 14 << "\" y=\"" << height - 9
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_string(kScenarios[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_phi_density(std::span<const RunResult> runs) {
  std::vector<std::pair<double, double>> pts;
  for (const RunResult& r : runs)
    if (r.phi_y && r.phi_k) pts.emplace_back(*r.phi_y, *r.phi_k);

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (!pts.empty()) {
    xmin = ymin = 1.0;
    xmax = ymax = -1.0;
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x), xmax = std::max(xmax, x);
      ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
    const double lo = std::min(xmin, ymin), hi = std::max(xmax, ymax);
    const double pad = 0.05 * std::max(hi - lo, 1e-3);
    xmin = ymin = lo - pad;
    xmax = ymax = hi + pad;
  }

  const double size = 480, margin = 60, plot = size - 2 * margin;
  const int bins = 24;
  const double radius = plot / bins / std::sqrt(3.0);
  const double dx = std::sqrt(3.0) * radius, dy = 1.5 * radius;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * plot; };
  auto py = [&](double y) { return size - margin - (y - ymin) / (ymax - ymin) * plot; };

  // Pointy-top hexagons on an offset grid; nearest of the two candidate
  // lattices picks the cell.
  std::map<std::pair<int, int>, int> counts;
  for (const auto& [x, y] : pts) {
    const double sx = px(x) - margin, sy = py(y) - margin;
    const int row = static_cast<int>(std::floor(sy / dy));
    std::pair<int, int> best{0, 0};
    double best_d = 1e300;
    for (int r = row - 1; r <= row + 1; ++r) {
      const double off = (r & 1) ? dx / 2 : 0.0;
      const int col = static_cast<int>(std::round((sx - off) / dx));
      for (int c = col - 1; c <= col + 1; ++c) {
        const double cx = c * dx + off, cy = r * dy;
        const double d = (sx - cx) * (sx - cx) + (sy - cy) * (sy - cy);
        if (d < best_d) best_d = d, best = {r, c};
      }
    }
    ++counts[best];
  }
  int peak = 1;
  for (const auto& [_, n] : counts) peak = std::max(peak, n);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << size / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">Joint density of phi_y and "
         "phi_k ("
      << pts.size() << " runs)</text>\n";
  for (const auto& [key, n] : counts) {
    const auto [r, c] = key;
    const double cx = margin + c * dx + ((r & 1) ? dx / 2 : 0.0), cy = margin + r * dy;
    const double shade = static_cast<double>(n) / peak;
    const int g = static_cast<int>(230 - 200 * shade);
    svg << "<polygon points=\"";
    for (int k = 0; k < 6; ++k) {
      const double a = M_PI / 180.0 * (60.0 * k - 30.0);
      svg << (k ? " " : "") << fmt("%.2f", cx + radius * std::cos(a)) << ',' << fmt("%.2f", cy + radius * std::sin(a));
    }
    svg << "\" fill=\"rgb(" << g / 3 << ',' << g / 2 + 40 << ',' << g << ")\" stroke=\"none\"><title>" << n
        << "</title></polygon>\n";
  }
  svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot << "\" height=\"" << plot
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double vx = xmin + (xmax - xmin) * t / 4.0, vy = ymin + (ymax - ymin) * t / 4.0;
    svg << "<text x=\"" << px(vx) << "\" y=\"" << size - margin + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.3f", vx) << "</text>\n";
    svg << "<text x=\"" << margin - 6 << "\" y=\"" << py(vy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.3f", vy) << "</text>\n";
  }
  svg << "<text x=\"" << size / 2 << "\" y=\"" << size - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">phi_y</text>\n";
  svg << "<text x=\"16\" y=\"" << size / 2 << "\" transform=\"rotate(-90 16 " << size / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">phi_k</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hpssd
