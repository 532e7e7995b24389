#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace loosecore {

class Hypergraph;

/// Bipartite incidence structure of a hypergraph: variable nodes 0..n-1 are
/// the vertices, factor nodes n..n+m-1 are the edges, and the graph edges
/// are the incidences. Immutable after construction and safe to share.
///
/// Incidences carry ids 0..incidence_count()-1, laid out factor-by-factor;
/// the peeling code indexes its alive/dead flags with them.
class FactorGraph {
 public:
  static FactorGraph from_hypergraph(const Hypergraph& h);

  /// Builds from explicit factor adjacency lists. No validation beyond
  /// vertex range, so pathological inputs (double edges, duplicated factor
  /// neighborhoods) can be constructed for validation tests.
  FactorGraph(std::uint32_t variable_count,
              const std::vector<std::vector<std::uint32_t>>& factor_neighbors);

  std::uint32_t variable_count() const { return n_; }
  std::uint32_t factor_count() const { return m_; }
  std::uint32_t node_count() const { return n_ + m_; }
  bool is_variable(std::uint32_t node) const { return node < n_; }

  /// Neighbors of a node, as node ids (factors for a variable, variables for
  /// a factor).
  std::span<const std::uint32_t> neighbors(std::uint32_t node) const;
  std::uint32_t degree(std::uint32_t node) const {
    return static_cast<std::uint32_t>(neighbors(node).size());
  }

  std::size_t incidence_count() const { return fac_adj_.size(); }

  // Incidence access used by the peeling engine. Incidence e belongs to one
  // factor and touches variable incident_variable(e).
  std::uint32_t incident_variable(std::size_t e) const { return fac_adj_[e]; }
  /// Incidence ids of a factor form the contiguous range [first, second).
  std::pair<std::uint32_t, std::uint32_t> factor_incidence_range(
      std::uint32_t factor) const;
  /// For variable v: incidence ids, parallel to neighbors(v).
  std::span<const std::uint32_t> variable_incidences(std::uint32_t v) const;

 private:
  FactorGraph() = default;
  void build_variable_side();

  std::uint32_t n_ = 0;
  std::uint32_t m_ = 0;
  std::vector<std::uint32_t> fac_off_;   // m+1 offsets into fac_adj_
  std::vector<std::uint32_t> fac_adj_;   // variable ids per factor
  std::vector<std::uint32_t> var_off_;   // n+1 offsets into var_adj_
  std::vector<std::uint32_t> var_adj_;   // factor node ids per variable
  std::vector<std::uint32_t> var_inc_;   // incidence ids, parallel to var_adj_
};

/// Validity report for the structural conditions a factor graph of a simple
/// hypergraph must satisfy: no variable listed twice under one factor, and
/// no two factors with identical neighbor sets.
struct PlainnessReport {
  enum class Violation { none, double_edge, duplicate_factors };
  bool ok = true;
  Violation violation = Violation::none;
  std::uint32_t factor_a = 0;  // witness factor (node id)
  std::uint32_t factor_b = 0;  // second factor for duplicate_factors
  std::uint32_t variable = 0;  // repeated variable for double_edge
};

PlainnessReport is_r_plain(const FactorGraph& g);

/// BFS ball around a root, organized by exact distance.
struct LayeredNeighborhood {
  std::uint32_t root = 0;
  unsigned depth = 0;                            // requested radius
  std::vector<std::vector<std::uint32_t>> layers;  // size depth+1, maybe empty tails
  std::unordered_map<std::uint32_t, std::uint32_t> parent;  // non-root nodes
  bool is_tree = false;    // no cycle inside the explored ball
  bool truncated = false;  // exploration stopped once the ball exceeded node_cap
};

/// Layers up to `depth` by exact graph distance. Exploration stops (and the
/// result is flagged truncated) once the ball grows past node_cap; the
/// two-argument form applies the default cap.
LayeredNeighborhood bfs_layers(const FactorGraph& g, std::uint32_t root,
                               unsigned depth, std::size_t node_cap);
LayeredNeighborhood bfs_layers(const FactorGraph& g, std::uint32_t root,
                               unsigned depth);

/// Default exploration cap ceil(log^2 n'), n' = node count.
std::size_t default_node_cap(const FactorGraph& g);

}  // namespace loosecore
