#include "hpssd/recruitment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "hpssd/distributions.hpp"
#include "hpssd/error.hpp"

namespace hpssd {

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::I: return "I";
    case Scenario::II: return "II";
    case Scenario::III: return "III";
    case Scenario::IV: return "IV";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view text) {
  for (Scenario s : kScenarios)
    if (to_string(s) == text) return s;
  return std::nullopt;
}

bool uses_yule(Scenario scenario) { return scenario == Scenario::II || scenario == Scenario::IV; }
bool uses_half_seeds(Scenario scenario) { return scenario == Scenario::III || scenario == Scenario::IV; }

void assign_attrition(Population& population, double r_v, Rng& rng) {
  if (!(r_v >= 0.0 && r_v <= 1.0)) throw ParameterError("assign_attrition: r_v must lie in [0, 1]");
  const double mean_e = population.mean_risk();
  for (Node& node : population.nodes) {
    const double p_r = std::clamp(r_v + ((node.e - mean_e) / 10.0) * 0.25, 0.0, 1.0);
    node.r = static_cast<double>(std::binomial_distribution<int>(100, p_r)(rng)) / 100.0;
  }
}

std::int64_t golden_draw_size(double r_v) {
  if (!(r_v >= 0.0 && r_v < 1.0)) throw ParameterError("golden sample: r_v must lie in [0, 1)");
  return static_cast<std::int64_t>(std::floor(1000.0 / (1.0 - r_v)));
}

std::vector<std::int64_t> RecruitmentForest::stage_sizes() const {
  std::vector<std::int64_t> sizes;
  for (const ForestRecord& r : records) {
    if (static_cast<std::size_t>(r.stage) >= sizes.size()) sizes.resize(static_cast<std::size_t>(r.stage) + 1, 0);
    ++sizes[static_cast<std::size_t>(r.stage)];
  }
  return sizes;
}

std::optional<double> estimate_mean(const Population& population, std::span<const std::int32_t> members) {
  if (members.empty()) return std::nullopt;
  std::int64_t positives = 0;
  for (std::int32_t id : members) positives += population.nodes[id].y;
  return static_cast<double>(positives) / static_cast<double>(members.size());
}

std::optional<double> estimate_mean(const Population& population, const ScenarioSample& sample) {
  return estimate_mean(population, sample.members);
}

ScenarioSample draw_golden_sample(const Population& population, Rng& rng) {
  const std::int64_t draw = golden_draw_size(population.config.r_v);
  const auto n = static_cast<std::int64_t>(population.size());
  if (draw > n)
    throw ConfigError("golden sample of " + std::to_string(draw) + " exceeds population of " + std::to_string(n));

  // Partial Fisher-Yates over the id range.
  std::vector<std::int32_t> ids(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(n); ++i) ids[i] = i;
  ScenarioSample golden;
  golden.drawn = draw;
  for (std::int64_t k = 0; k < draw; ++k) {
    const auto j = k + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(n - k)));
    std::swap(ids[k], ids[j]);
    const std::int32_t id = ids[k];
    if (bernoulli(rng, 1.0 - population.nodes[id].r)) golden.members.push_back(id);
  }
  golden.seeds = golden.members;
  golden.estimate = estimate_mean(population, golden);
  return golden;
}

ScenarioRun run_scenario(const Population& population, const ScenarioSample& golden, Scenario scenario, Rng& rng,
                         int max_stages) {
  ScenarioRun run;
  run.forest.scenario = scenario;
  run.sample.scenario = scenario;

  std::vector<std::int32_t> seeds = golden.members;
  if (uses_half_seeds(scenario)) {
    const std::size_t half = seeds.size() / 2;
    for (std::size_t k = 0; k < half; ++k) std::swap(seeds[k], seeds[k + uniform_index(rng, seeds.size() - k)]);
    seeds.resize(half);
  }
  run.sample.seeds = seeds;
  if (seeds.empty()) return run;

  std::vector<std::uint8_t> in_sample(population.size(), 0);
  for (std::int32_t id : seeds) {
    in_sample[id] = 1;
    run.forest.records.push_back({id, 0, -1});
  }

  const dist::ShiftedYuleParams yule{kYuleLambda};
  std::vector<std::int32_t> current = seeds;
  std::vector<std::int32_t> next;
  std::vector<std::int32_t> scratch;
  for (int stage = 0; !current.empty(); ++stage) {
    if (stage >= max_stages) {
      run.hit_stage_cap = true;
      break;
    }
    next.clear();
    for (std::int32_t recruiter : current) {
      const auto neighbours = population.neighbours(recruiter);
      std::int64_t quota =
          uses_yule(scenario) ? dist::sample_shifted_yule(yule, rng) : dist::sample_poisson(kPoissonRecruitMean, rng);
      quota = std::min<std::int64_t>(quota, static_cast<std::int64_t>(neighbours.size()));
      run.quotas.push_back(static_cast<std::int32_t>(quota));
      if (quota == 0) continue;

      // Recruits are new nodes: uniform choice of distinct neighbours among
      // those not yet in the sample.
      scratch.clear();
      for (std::int32_t nb : neighbours)
        if (!in_sample[nb]) scratch.push_back(nb);
      const auto picks = std::min<std::size_t>(static_cast<std::size_t>(quota), scratch.size());
      for (std::size_t k = 0; k < picks; ++k) {
        std::swap(scratch[k], scratch[k + uniform_index(rng, scratch.size() - k)]);
        const std::int32_t recruit = scratch[k];
        if (!bernoulli(rng, 1.0 - population.nodes[recruit].r)) continue;
        in_sample[recruit] = 1;
        next.push_back(recruit);
        run.forest.records.push_back({recruit, stage + 1, recruiter});
      }
    }
    current.swap(next);
  }

  run.sample.members.reserve(run.forest.records.size());
  for (const ForestRecord& r : run.forest.records) run.sample.members.push_back(r.node);
  run.sample.estimate = estimate_mean(population, run.sample);
  return run;
}

void write_forest_csv(std::ostream& out, std::span<const RecruitmentForest> forests, bool header) {
  if (header) out << "scenario,node_id,stage,recruiter_id\n";
  for (const RecruitmentForest& forest : forests)
    for (const ForestRecord& r : forest.records) {
      out << to_string(forest.scenario) << ',' << r.node << ',' << r.stage << ',';
      if (r.recruiter >= 0) out << r.recruiter;
      out << '\n';
    }
}

}  // namespace hpssd
