#include "hpssd/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "hpssd/distributions.hpp"
#include "hpssd/error.hpp"

namespace hpssd {
namespace {

// Substream counters of generate_population.
enum Stream : std::uint64_t { kCliques = 1, kBlocks = 2, kBlockEdges = 3, kOutcomes = 4 };

std::uint64_t edge_key(std::int32_t u, std::int32_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

const char* to_string(EdgeKind kind) { return kind == EdgeKind::clique ? "clique" : "block"; }

double Population::prevalence() const {
  if (nodes.empty()) return 0.0;
  std::int64_t count = 0;
  for (const Node& n : nodes) count += n.y;
  return static_cast<double>(count) / static_cast<double>(nodes.size());
}

double Population::mean_degree() const {
  if (nodes.empty()) return 0.0;
  return 2.0 * static_cast<double>(edges.size()) / static_cast<double>(nodes.size());
}

double Population::mean_risk() const {
  if (nodes.empty()) return 0.0;
  double sum = 0.0;
  for (const Node& n : nodes) sum += n.e;
  return sum / static_cast<double>(nodes.size());
}

CliqueDraw generate_cliques(std::int32_t omega_count, double p_D, Rng& rng) {
  if (omega_count < 1) throw ParameterError("generate_cliques: omega_count must be >= 1");
  CliqueDraw draw;
  draw.nodes.reserve(static_cast<std::size_t>(omega_count) * 3);
  for (std::int32_t c = 0; c < omega_count; ++c) {
    const std::int32_t size = dist::sample_clique_size(rng);
    const int level = dist::sample_block_index(p_D, rng);
    const auto first = static_cast<std::int32_t>(draw.nodes.size());
    for (std::int32_t k = 0; k < size; ++k) {
      Node node;
      node.id = first + k;
      node.clique = c;
      node.alpha = dist::level_value(level);
      draw.nodes.push_back(node);
    }
    for (std::int32_t a = first; a < first + size; ++a)
      for (std::int32_t b = a + 1; b < first + size; ++b) draw.edges.push_back({a, b, EdgeKind::clique});
  }
  return draw;
}

void assign_blocks(std::span<Node> nodes, double p_D, Rng& rng) {
  for (Node& node : nodes) {
    const int level = dist::sample_block_index(p_D, rng);
    node.block = static_cast<std::int8_t>(level);
    node.beta = dist::level_value(level);
  }
}

double mean_clique_degree(std::span<const Node> nodes) {
  if (nodes.empty()) return 0.0;
  // Nodes of one clique are contiguous in generation order, but count by id
  // so hand-built tables work as well.
  std::int32_t max_clique = 0;
  for (const Node& n : nodes) max_clique = std::max(max_clique, n.clique);
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(max_clique) + 1, 0);
  for (const Node& n : nodes) ++sizes[n.clique];
  double total = 0.0;
  for (std::int64_t s : sizes) total += static_cast<double>(s) * static_cast<double>(s - 1);
  return total / static_cast<double>(nodes.size());
}

BlockEdgeDraw sample_block_edges(std::span<const Node> nodes, const MixingMatrix& matrix,
                                 double target_mean_degree, Rng& rng) {
  constexpr int kB = MixingMatrix::kBlocks;
  BlockEdgeDraw draw;
  const double n = static_cast<double>(nodes.size());
  if (nodes.empty()) return draw;

  const double missing_degree = target_mean_degree - mean_clique_degree(nodes);
  if (missing_degree <= 0.0) {
    if (missing_degree < 0.0) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "target mean degree %.4g is below the clique-induced mean degree %.4g; no block edges drawn",
                    target_mean_degree, target_mean_degree - missing_degree);
      draw.warning = buf;
    }
    return draw;
  }

  std::array<std::vector<std::int32_t>, kB> members;
  for (const Node& node : nodes) members[node.block].push_back(node.id);

  // Cumulative weights over ordered block pairs (a, b), index a * kB + b.
  std::array<double, kB * kB> cumulative{};
  double total = 0.0;
  for (int a = 0; a < kB; ++a)
    for (int b = 0; b < kB; ++b) {
      total += matrix(a, b) * static_cast<double>(members[a].size()) * static_cast<double>(members[b].size());
      cumulative[a * kB + b] = total;
    }
  if (!(total > 0.0)) return draw;

  const auto edge_count = dist::sample_poisson(missing_degree * n / 2.0, rng);
  draw.edges.reserve(static_cast<std::size_t>(edge_count));
  for (std::int64_t m = 0; m < edge_count; ++m) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // u == total after rounding: step back to the last cell of positive width.
    if (it == cumulative.end()) {
      --it;
      while (it != cumulative.begin() && *(it - 1) == *it) --it;
    }
    const auto cell = it - cumulative.begin();
    const auto& from = members[cell / kB];
    const auto& to = members[cell % kB];
    const std::int32_t a = from[uniform_index(rng, from.size())];
    const std::int32_t b = to[uniform_index(rng, to.size())];
    draw.edges.push_back({a, b, EdgeKind::block});
  }
  return draw;
}

Graft graft(std::span<const Edge> clique_edges, std::span<const Edge> block_edges, std::size_t node_count) {
  struct Keyed {
    std::uint64_t key;
    EdgeKind kind;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(clique_edges.size() + block_edges.size());
  for (auto list : {clique_edges, block_edges})
    for (const Edge& e : list)
      if (e.u != e.v) keyed.push_back({edge_key(e.u, e.v), e.kind});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.key != b.key ? a.key < b.key : a.kind < b.kind;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) { return a.key == b.key; }),
              keyed.end());

  Graft result;
  result.edges.reserve(keyed.size());
  result.degrees.assign(node_count, 0);
  for (const Keyed& k : keyed) {
    const auto u = static_cast<std::int32_t>(k.key >> 32);
    const auto v = static_cast<std::int32_t>(k.key & 0xFFFFFFFFu);
    result.edges.push_back({u, v, k.kind});
    ++result.degrees[u];
    ++result.degrees[v];
  }
  return result;
}

void compute_risk_scores(std::span<Node> nodes, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ParameterError("compute_risk_scores: w must lie in [0, 1]");
  for (Node& node : nodes) node.e = node.alpha * w + node.beta * (1.0 - w);
}

void assign_outcomes(std::span<Node> nodes, Rng& rng) {
  for (Node& node : nodes) node.y = bernoulli(rng, node.e) ? 1 : 0;
}

std::optional<double> edge_assortativity(std::span<const Edge> edges, std::span<const double> values) {
  if (edges.size() < 2) return std::nullopt;
  const double endpoints = 2.0 * static_cast<double>(edges.size());
  double sum = 0.0;
  for (const Edge& e : edges) sum += values[e.u] + values[e.v];
  const double mean = sum / endpoints;
  double var = 0.0;
  double cov = 0.0;
  for (const Edge& e : edges) {
    const double a = values[e.u] - mean;
    const double b = values[e.v] - mean;
    var += a * a + b * b;
    cov += 2.0 * a * b;
  }
  var /= endpoints;
  cov /= endpoints;
  if (!(var > 1e-14 * (mean * mean + 1.0))) return std::nullopt;
  return std::clamp(cov / var, -1.0, 1.0);
}

std::optional<double> edge_assortativity(const Population& population, Attribute attribute) {
  std::vector<double> values(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    const Node& n = population.nodes[i];
    values[i] = attribute == Attribute::outcome ? static_cast<double>(n.y) : static_cast<double>(n.degree);
  }
  return edge_assortativity(population.edges, values);
}

void index_adjacency(Population& population) {
  const std::size_t n = population.size();
  population.offsets.assign(n + 1, 0);
  for (const Edge& e : population.edges) {
    ++population.offsets[e.u + 1];
    ++population.offsets[e.v + 1];
  }
  std::partial_sum(population.offsets.begin(), population.offsets.end(), population.offsets.begin());
  population.adjacency.assign(static_cast<std::size_t>(population.offsets[n]), 0);
  std::vector<std::int64_t> cursor(population.offsets.begin(), population.offsets.end() - 1);
  for (const Edge& e : population.edges) {
    population.adjacency[cursor[e.u]++] = e.v;
    population.adjacency[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i)
    population.nodes[i].degree = static_cast<std::int32_t>(population.offsets[i + 1] - population.offsets[i]);
}

Population generate_population(const RunConfig& config, std::uint64_t seed) {
  if (auto problem = validate(config); !problem.empty()) throw ConfigError(problem);

  Population pop;
  pop.config = config;

  Rng clique_rng = make_rng(seed, kCliques);
  CliqueDraw cliques = generate_cliques(config.omega_count, config.p_D, clique_rng);
  pop.nodes = std::move(cliques.nodes);

  Rng block_rng = make_rng(seed, kBlocks);
  assign_blocks(pop.nodes, config.p_D, block_rng);

  const MixingMatrix matrix = apply_gamma(build_base_matrix(), config.gamma);
  Rng edge_rng = make_rng(seed, kBlockEdges);
  BlockEdgeDraw block = sample_block_edges(pop.nodes, matrix, config.target_mean_degree, edge_rng);
  if (block.warning) pop.warnings.push_back(*block.warning);

  Graft grafted = graft(cliques.edges, block.edges, pop.nodes.size());
  pop.edges = std::move(grafted.edges);
  index_adjacency(pop);

  compute_risk_scores(pop.nodes, config.w);
  Rng outcome_rng = make_rng(seed, kOutcomes);
  assign_outcomes(pop.nodes, outcome_rng);

  pop.phi_y = edge_assortativity(pop, Attribute::outcome);
  pop.phi_k = edge_assortativity(pop, Attribute::degree);
  return pop;
}

void write_node_table(std::ostream& out, const Population& population) {
  out << "id,clique,alpha,beta,e,y,r,degree\n";
  char buf[256];
  for (const Node& n : population.nodes) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d,%.17g,%d\n", n.id, n.clique, n.alpha, n.beta, n.e,
                  static_cast<int>(n.y), n.r, n.degree);
    out << buf;
  }
}

void write_edge_list(std::ostream& out, const Population& population) {
  for (const Edge& e : population.edges) out << e.u << '\t' << e.v << '\t' << to_string(e.kind) << '\n';
}

}  // namespace hpssd
