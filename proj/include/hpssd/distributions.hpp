#pragma once

#include <array>
#include <cstdint>

#include "hpssd/rng.hpp"

// Random samplers for the stochastic primitives of population generation
// and recruitment. Every sampler is a pure function of its parameters and
// the caller's generator; none keeps state between calls.
namespace hpssd::dist {

inline constexpr int kLevels = 10;

// Admissible risk levels 0.05, 0.15, ..., 0.95 indexed 0..9.
inline constexpr std::array<double, kLevels> kLevelValues = {
    0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};

inline constexpr double level_value(int index) { return kLevelValues[index]; }

// Beta-binomial with intra-class correlation `rho`:
//   q ~ Beta(p (1/rho - 1), (1 - p)(1/rho - 1)),  k ~ Binomial(trials, q).
struct OverdispersedBinomialParams {
  int trials = 9;
  double p = 0.225;
  double rho = 0.3;

  // Throws ParameterError.
  void validate() const;
};

int sample_overdispersed_binomial(const OverdispersedBinomialParams& params, Rng& rng);
double overdispersed_binomial_mean(const OverdispersedBinomialParams& params);
double overdispersed_binomial_variance(const OverdispersedBinomialParams& params);
// Exact probability of k successes.
double overdispersed_binomial_pmf(int k, const OverdispersedBinomialParams& params);

inline constexpr int kBlockTrials = 9;
inline constexpr double kBlockRho = 0.3;

// Level index in 0..9 drawn from OverBin(9, p_D, 0.3).
int sample_block_index(double p_D, Rng& rng);
// Level value: OverBin(9, p_D, 0.3) * 0.1 + 0.05.
double sample_block_level(double p_D, Rng& rng);

struct ShiftedYuleParams {
  double lambda = 3.0;

  void validate() const;
};

// f(k | lambda) = lambda * Gamma(lambda + 1) * Gamma(k + 1) / Gamma(lambda + k + 2)
double yule_pmf(std::int64_t k, double lambda);
// P(K >= k) = Gamma(k + 1) Gamma(lambda + 1) / Gamma(k + lambda + 1)
double yule_survival(std::int64_t k, double lambda);
// lambda / (lambda - 1) - 1
double yule_mean(double lambda);

std::int64_t sample_shifted_yule(const ShiftedYuleParams& params, Rng& rng);

// Exact Poisson draw: multiplication method below 30, library PTRS above.
std::int64_t sample_poisson(double lambda, Rng& rng);
double poisson_pmf(std::int64_t k, double lambda);

inline constexpr double kCliqueLambda = 1.2;

// Household size: Poisson(1.2) + 1.
std::int32_t sample_clique_size(Rng& rng);

}  // namespace hpssd::dist
