#pragma once

#include <array>
#include <iosfwd>

namespace hpssd {

// Symmetric 10x10 block propensity matrix, normalized to a grand sum of 1.
// Block j (0-based) holds the nodes at risk level j * 0.1 + 0.05.
class MixingMatrix {
 public:
  static constexpr int kBlocks = 10;
  using Entries = std::array<std::array<double, kBlocks>, kBlocks>;

  MixingMatrix() = default;
  MixingMatrix(const Entries& entries, double gamma) : entries_(entries), gamma_(gamma) {}

  double operator()(int a, int b) const { return entries_[a][b]; }
  const Entries& entries() const { return entries_; }
  double gamma() const { return gamma_; }
  double grand_sum() const;

  bool is_symmetric() const;
  // entries[a][a] >= entries[a][b] for all a, b.
  bool is_row_diagonal_dominant() const;
  // entries[a][a] > entries[a+1][a+1] for all a.
  bool has_decreasing_diagonal() const;

  // 10 lines of 10 comma separated values, %.17g.
  void write_csv(std::ostream& out) const;

 private:
  Entries entries_{};
  double gamma_ = 1.0;
};

// Column x (1-based) holds the Normal(mean = x, sd = x) density at 1..10;
// the lower triangle is then overwritten with the transposed upper triangle.
// Not normalized.
MixingMatrix::Entries raw_propensities();

// raw_propensities() divided by its grand sum.
MixingMatrix build_base_matrix();

// Elementwise power `gamma` followed by renormalization. Throws
// ParameterError for gamma <= 0.
MixingMatrix apply_gamma(const MixingMatrix& base, double gamma);

}  // namespace hpssd
