#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hpssd/netgen.hpp"
#include "hpssd/rng.hpp"

namespace hpssd {

enum class Scenario : std::uint8_t { I = 0, II = 1, III = 2, IV = 3 };

inline constexpr std::array<Scenario, 4> kScenarios = {Scenario::I, Scenario::II, Scenario::III, Scenario::IV};

std::string_view to_string(Scenario scenario);
std::optional<Scenario> parse_scenario(std::string_view text);
inline std::size_t index_of(Scenario s) { return static_cast<std::size_t>(s); }

// I and III: Poisson(0.5) recruits; II and IV: shifted Yule(3).
bool uses_yule(Scenario scenario);
// III and IV seed from a random half of the golden sample.
bool uses_half_seeds(Scenario scenario);

inline constexpr double kPoissonRecruitMean = 0.5;
inline constexpr double kYuleLambda = 3.0;
inline constexpr int kMaxStages = 1000;

// p_r = r_v + ((e_i - mean(e)) / 10) * 0.25 clamped to [0, 1],
// r_i = Binomial(100, p_r) / 100.
void assign_attrition(Population& population, double r_v, Rng& rng);

// floor(1000 / (1 - r_v))
std::int64_t golden_draw_size(double r_v);

struct ScenarioSample {
  // Empty for the golden sample.
  std::optional<Scenario> scenario;
  std::vector<std::int32_t> members;
  std::vector<std::int32_t> seeds;
  // Mean y over members; empty when there are none.
  std::optional<double> estimate;
  // Golden sample only: nodes contacted before non-response.
  std::int64_t drawn = 0;
};

// A population member that was reached and responded. Seeds carry
// recruiter == -1 and stage 0.
struct ForestRecord {
  std::int32_t node = 0;
  std::int32_t stage = 0;
  std::int32_t recruiter = -1;
};

struct RecruitmentForest {
  Scenario scenario = Scenario::I;
  std::vector<ForestRecord> records;  // in order of entry

  // n_t for t = 0 .. last non-empty stage.
  std::vector<std::int64_t> stage_sizes() const;
};

struct ScenarioRun {
  ScenarioSample sample;
  RecruitmentForest forest;
  // Recruit quota m_i of every processed member, after the degree cap.
  std::vector<std::int32_t> quotas;
  bool hit_stage_cap = false;
};

// Benchmark sample: floor(1000 / (1 - r_v)) distinct nodes drawn uniformly,
// each kept with probability 1 - r_i. Throws ConfigError when the draw
// exceeds the population.
ScenarioSample draw_golden_sample(const Population& population, Rng& rng);

// Link-traced recruitment from the golden sample until a stage comes back
// empty.
ScenarioRun run_scenario(const Population& population, const ScenarioSample& golden, Scenario scenario, Rng& rng,
                         int max_stages = kMaxStages);

std::optional<double> estimate_mean(const Population& population, std::span<const std::int32_t> members);
std::optional<double> estimate_mean(const Population& population, const ScenarioSample& sample);

// "scenario,node_id,stage,recruiter_id"; header written when `header` is set.
void write_forest_csv(std::ostream& out, std::span<const RecruitmentForest> forests, bool header = true);

}  // namespace hpssd
