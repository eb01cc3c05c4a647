#include "hpssd/mixing.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "hpssd/error.hpp"

namespace hpssd {
namespace {

double normal_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

MixingMatrix::Entries normalized(MixingMatrix::Entries entries) {
  double sum = 0.0;
  for (const auto& row : entries)
    for (double v : row) sum += v;
  for (auto& row : entries)
    for (double& v : row) v /= sum;
  return entries;
}

}  // namespace

double MixingMatrix::grand_sum() const {
  double sum = 0.0;
  for (const auto& row : entries_)
    for (double v : row) sum += v;
  return sum;
}

bool MixingMatrix::is_symmetric() const {
  for (int a = 0; a < kBlocks; ++a)
    for (int b = a + 1; b < kBlocks; ++b)
      if (entries_[a][b] != entries_[b][a]) return false;
  return true;
}

bool MixingMatrix::is_row_diagonal_dominant() const {
  for (int a = 0; a < kBlocks; ++a)
    for (int b = 0; b < kBlocks; ++b)
      if (entries_[a][b] > entries_[a][a]) return false;
  return true;
}

bool MixingMatrix::has_decreasing_diagonal() const {
  for (int a = 0; a + 1 < kBlocks; ++a)
    if (!(entries_[a][a] > entries_[a + 1][a + 1])) return false;
  return true;
}

void MixingMatrix::write_csv(std::ostream& out) const {
  char buf[32];
  for (const auto& row : entries_) {
    for (int b = 0; b < kBlocks; ++b) {
      std::snprintf(buf, sizeof buf, "%.17g", row[b]);
      out << (b ? "," : "") << buf;
    }
    out << '\n';
  }
}

MixingMatrix::Entries raw_propensities() {
  constexpr int n = MixingMatrix::kBlocks;
  MixingMatrix::Entries m{};
  for (int col = 0; col < n; ++col) {
    const double x = col + 1.0;
    for (int row = 0; row < n; ++row) m[row][col] = normal_density(row + 1.0, x, x);
  }
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < row; ++col) m[row][col] = m[col][row];
  return m;
}

MixingMatrix build_base_matrix() { return MixingMatrix(normalized(raw_propensities()), 1.0); }

MixingMatrix apply_gamma(const MixingMatrix& base, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ParameterError("mixing: gamma must be positive, got " + std::to_string(gamma));
  MixingMatrix::Entries m = base.entries();
  for (auto& row : m)
    for (double& v : row) v = std::pow(v, gamma);
  return MixingMatrix(normalized(m), base.gamma() * gamma);
}

}  // namespace hpssd
