#pragma once

#include <cstdint>
#include <string>

namespace hpssd {

// Hyperparameters of one simulated population and its sampling run.
struct RunConfig {
  std::int64_t run_id = 0;
  std::uint64_t master_seed = 0;
  // Seed of the run's own substream; every random draw of the run derives
  // from it.
  std::uint64_t stream_id = 0;

  double p_D = 0.225;              // centrality of the risk-level distribution
  std::int32_t omega_count = 10000;  // number of cliques (households)
  double target_mean_degree = 15.0;
  double w = 0.3;                  // familism: weight of the clique coefficient
  double gamma = 0.5;              // homophily exponent of the mixing matrix
  double r_v = 0.25;               // universal attrition

  bool operator==(const RunConfig&) const = default;
};

// Sampling ranges of the Monte Carlo design.
namespace ranges {
inline constexpr double kPdMin = 0.15, kPdMax = 0.30;
inline constexpr std::int32_t kOmegaMin = 5000, kOmegaMax = 15000;
inline constexpr double kDegreeMin = 5.0, kDegreeMax = 25.0;
inline constexpr double kWMin = 0.1, kWMax = 0.5;
inline constexpr double kGammaMin = 0.2, kGammaMax = 0.8;
inline constexpr double kRvMin = 0.0, kRvMax = 0.5;
}  // namespace ranges

// True when every field lies inside the Monte Carlo sampling ranges.
bool within_design_ranges(const RunConfig& config);

// Empty when valid for simulation; otherwise a description of the problem.
// Looser than within_design_ranges: toy populations are allowed.
std::string validate(const RunConfig& config);

}  // namespace hpssd
