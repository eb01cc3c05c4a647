#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpssd/config.hpp"
#include "hpssd/mixing.hpp"
#include "hpssd/rng.hpp"

namespace hpssd {

struct Node {
  std::int32_t id = 0;
  std::int32_t clique = 0;
  double alpha = 0.0;  // clique-level risk coefficient
  double beta = 0.0;   // block-level risk coefficient
  std::int8_t block = 0;  // index of beta in 0..9
  double e = 0.0;      // risk score
  std::int8_t y = 0;   // outcome, 1 = target (smoker)
  double r = 0.0;      // individual attrition, set by assign_attrition
  std::int32_t degree = 0;
};

enum class EdgeKind : std::uint8_t { clique = 0, block = 1 };

struct Edge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  EdgeKind kind = EdgeKind::clique;
};

const char* to_string(EdgeKind kind);

struct Population {
  std::vector<Node> nodes;
  std::vector<Edge> edges;  // undirected, u < v, no duplicates
  RunConfig config;
  std::optional<double> phi_y;
  std::optional<double> phi_k;
  std::vector<std::string> warnings;

  // CSR adjacency; neighbours of i are adjacency[offsets[i] .. offsets[i+1]).
  std::vector<std::int64_t> offsets;
  std::vector<std::int32_t> adjacency;

  std::size_t size() const { return nodes.size(); }
  std::span<const std::int32_t> neighbours(std::int32_t i) const {
    return {adjacency.data() + offsets[i], adjacency.data() + offsets[i + 1]};
  }
  // Population quota of y = 1.
  double prevalence() const;
  double mean_degree() const;
  double mean_risk() const;
};

struct CliqueDraw {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

// omega_count households of size Poisson(1.2) + 1 sharing one alpha drawn
// from the risk-level distribution; every within-household pair is linked.
CliqueDraw generate_cliques(std::int32_t omega_count, double p_D, Rng& rng);

// Independent block level for every node.
void assign_blocks(std::span<Node> nodes, double p_D, Rng& rng);

// Average clique-internal degree, sum(size * (size - 1)) / N.
double mean_clique_degree(std::span<const Node> nodes);

struct BlockEdgeDraw {
  std::vector<Edge> edges;  // raw draws: may hold self-loops and duplicates
  std::optional<std::string> warning;
};

// Poisson blockmodel in linear time. The edge count is
// Poisson((target - mean clique degree) * N / 2); every edge picks a block
// pair with probability proportional to B[b][b'] |b| |b'| and then a
// uniform node inside each block.
BlockEdgeDraw sample_block_edges(std::span<const Node> nodes, const MixingMatrix& matrix,
                                 double target_mean_degree, Rng& rng);

struct Graft {
  std::vector<Edge> edges;  // sorted by (u, v); clique provenance wins ties
  std::vector<std::int32_t> degrees;
};

// Union of both edge lists without self-loops or duplicates.
Graft graft(std::span<const Edge> clique_edges, std::span<const Edge> block_edges,
            std::size_t node_count);

// e = alpha * w + beta * (1 - w). Throws ParameterError for w outside [0, 1].
void compute_risk_scores(std::span<Node> nodes, double w);

// y ~ Bernoulli(e), independently.
void assign_outcomes(std::span<Node> nodes, Rng& rng);

enum class Attribute { outcome, degree };

// Pearson correlation of `values` across the symmetrized endpoint list of
// `edges`. Empty when fewer than 2 edges or zero endpoint variance.
std::optional<double> edge_assortativity(std::span<const Edge> edges, std::span<const double> values);
std::optional<double> edge_assortativity(const Population& population, Attribute attribute);

// Full cliques-and-blocks pipeline. Stages draw from independent substreams
// of `seed`, so two calls differing only in gamma share cliques, blocks and
// outcomes and differ only in their blockmodel edges.
Population generate_population(const RunConfig& config, std::uint64_t seed);

// Builds CSR adjacency and degrees from population.edges.
void index_adjacency(Population& population);

// "id,clique,alpha,beta,e,y,r,degree"
void write_node_table(std::ostream& out, const Population& population);
// One "u<TAB>v<TAB>provenance" line per edge.
void write_edge_list(std::ostream& out, const Population& population);

}  // namespace hpssd
