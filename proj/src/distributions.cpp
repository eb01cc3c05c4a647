#include "hpssd/distributions.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hpssd/error.hpp"

namespace hpssd::dist {

void OverdispersedBinomialParams::validate() const {
  if (trials < 1) throw ParameterError("overdispersed binomial: trials must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("overdispersed binomial: p must lie in [0, 1], got " + std::to_string(p));
  if (!(rho > 0.0 && rho < 1.0))
    throw ParameterError("overdispersed binomial: rho must lie in (0, 1), got " + std::to_string(rho));
}

int sample_overdispersed_binomial(const OverdispersedBinomialParams& params, Rng& rng) {
  params.validate();
  if (params.p == 0.0) return 0;
  if (params.p == 1.0) return params.trials;

  const double scale = 1.0 / params.rho - 1.0;
  const double a = params.p * scale;
  const double b = (1.0 - params.p) * scale;
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  const double sum = x + y;
  // Both gammas can underflow for tiny shapes; fall back on the mean.
  const double q = sum > 0.0 ? x / sum : params.p;

  int k = 0;
  for (int i = 0; i < params.trials; ++i) k += bernoulli(rng, q) ? 1 : 0;
  return k;
}

double overdispersed_binomial_mean(const OverdispersedBinomialParams& params) {
  params.validate();
  return params.trials * params.p;
}

double overdispersed_binomial_variance(const OverdispersedBinomialParams& params) {
  params.validate();
  const double n = params.trials;
  return n * params.p * (1.0 - params.p) * (1.0 + (n - 1.0) * params.rho);
}

double overdispersed_binomial_pmf(int k, const OverdispersedBinomialParams& params) {
  params.validate();
  if (k < 0 || k > params.trials) return 0.0;
  if (params.p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (params.p == 1.0) return k == params.trials ? 1.0 : 0.0;
  const double scale = 1.0 / params.rho - 1.0;
  const double a = params.p * scale;
  const double b = (1.0 - params.p) * scale;
  const int n = params.trials;
  auto lbeta = [](double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); };
  const double lchoose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lchoose + lbeta(k + a, n - k + b) - lbeta(a, b));
}

int sample_block_index(double p_D, Rng& rng) {
  return sample_overdispersed_binomial({kBlockTrials, p_D, kBlockRho}, rng);
}

double sample_block_level(double p_D, Rng& rng) {
  return level_value(sample_block_index(p_D, rng));
}

void ShiftedYuleParams::validate() const {
  if (!(lambda > 2.0))
    throw ParameterError("shifted Yule: lambda must exceed 2, got " + std::to_string(lambda));
}

double yule_pmf(std::int64_t k, double lambda) {
  ShiftedYuleParams{lambda}.validate();
  if (k < 0) return 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(std::log(lambda) + std::lgamma(lambda + 1.0) + std::lgamma(kk + 1.0) -
                  std::lgamma(lambda + kk + 2.0));
}

double yule_survival(std::int64_t k, double lambda) {
  ShiftedYuleParams{lambda}.validate();
  if (k <= 0) return 1.0;
  const double kk = static_cast<double>(k);
  return std::exp(std::lgamma(kk + 1.0) + std::lgamma(lambda + 1.0) - std::lgamma(kk + lambda + 1.0));
}

double yule_mean(double lambda) {
  ShiftedYuleParams{lambda}.validate();
  return lambda / (lambda - 1.0) - 1.0;
}

std::int64_t sample_shifted_yule(const ShiftedYuleParams& params, Rng& rng) {
  params.validate();
  // Inverse CDF on the survival scale: return the k with
  // S(k + 1) < v <= S(k), using S(k + 1) = S(k) (k + 1) / (k + lambda + 1).
  const double v = 1.0 - uniform01(rng);  // in (0, 1]
  double survival = 1.0;
  for (std::int64_t k = 0;; ++k) {
    const double next = survival * static_cast<double>(k + 1) / (static_cast<double>(k) + params.lambda + 1.0);
    if (v > next) return k;
    survival = next;
  }
}

std::int64_t sample_poisson(double lambda, Rng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError("poisson: lambda must be a finite non-negative number");
  if (lambda == 0.0) return 0;
  if (lambda < 30.0) {
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double prod = uniform01(rng);
    while (prod > limit) {
      ++k;
      prod *= uniform01(rng);
    }
    return k;
  }
  return std::poisson_distribution<std::int64_t>(lambda)(rng);
}

double poisson_pmf(std::int64_t k, double lambda) {
  if (!(lambda >= 0.0)) throw ParameterError("poisson: lambda must be non-negative");
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0));
}

std::int32_t sample_clique_size(Rng& rng) {
  return static_cast<std::int32_t>(sample_poisson(kCliqueLambda, rng)) + 1;
}

}  // namespace hpssd::dist
