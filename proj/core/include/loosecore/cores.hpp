#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "loosecore/factor_graph.hpp"

namespace loosecore {

class Hypergraph;

/// State of the synchronous peeling process on a factor graph. Each round
/// first identifies every node of degree exactly one, then removes all their
/// incident edges, so two degree-1 endpoints of a shared edge are both
/// disabled in the same round. Nodes are never deleted, only isolated.
class PeelState {
 public:
  explicit PeelState(const FactorGraph& g);

  /// Runs one synchronous round. Returns true if the graph was already at
  /// its fixpoint (no degree-1 node existed); the round counter still
  /// advances.
  bool step();

  bool at_fixpoint() const { return fixpoint_; }
  unsigned rounds_run() const { return round_; }
  /// Rounds that removed at least one edge; after the fixpoint this is the
  /// index of the first round with no change.
  unsigned effective_rounds() const { return effective_rounds_; }

  const std::vector<std::uint32_t>& degrees() const { return deg_; }
  /// Round in which each node was disabled; 0 = never.
  const std::vector<std::uint32_t>& disabled_round() const {
    return disabled_round_;
  }
  const std::vector<char>& incidence_alive() const { return alive_; }
  std::size_t live_edge_count() const { return live_edges_; }

 private:
  void remove_incidences_of(std::uint32_t node);

  const FactorGraph* g_;
  std::vector<std::uint32_t> deg_;
  std::vector<std::uint32_t> disabled_round_;
  std::vector<char> alive_;
  std::vector<std::uint32_t> candidates_;  // nodes that reached degree 1
  std::vector<std::uint32_t> next_candidates_;
  std::size_t live_edges_ = 0;
  unsigned round_ = 0;
  unsigned effective_rounds_ = 0;
  bool fixpoint_ = false;
};

enum class PeelMode { synchronous, queue };

/// Degrees in the reduced core (maximal subgraph with no degree-1 nodes) and
/// the derived structures built from it.
struct CoreResult {
  std::uint32_t variable_count = 0;
  std::uint32_t factor_count = 0;
  /// Final degree of every node after peeling; never 1.
  std::vector<std::uint32_t> reduced_degree;
  /// Degrees of variable nodes once full edges are restored to surviving
  /// factors; empty until padded_core_from_reduced fills it.
  std::vector<std::uint32_t> padded_variable_degree;
  /// Synchronous mode only: per-node disabling rounds (0 = never disabled).
  std::vector<std::uint32_t> disabled_round;
  std::size_t nonisolated_variables = 0;
  std::size_t nonisolated_factors = 0;
  std::size_t reduced_edge_count = 0;
  /// First peeling round with no change (synchronous mode; 0 in queue mode).
  unsigned rounds_to_fixpoint = 0;
  bool has_rounds = false;
  bool has_padded = false;
};

/// Peels to the fixpoint. Synchronous mode records per-round disabling
/// labels; queue mode uses a worklist and records only final degrees. Both
/// produce identical degree vectors.
CoreResult reduced_core(const FactorGraph& g, PeelMode mode = PeelMode::synchronous);

/// Degree histograms (as proportions) of variable and factor nodes after
/// `round` synchronous peeling rounds; rounds past the fixpoint return the
/// reduced-core histograms.
std::pair<std::vector<double>, std::vector<double>> degrees_after_round(
    const FactorGraph& g, unsigned round);

/// Restores, for each factor surviving in the reduced core, all its original
/// edges; variables gaining an edge move from degree 0 to 1. Returns a copy
/// of `reduced` with the padded-core degrees filled in.
CoreResult padded_core_from_reduced(const FactorGraph& g,
                                    const CoreResult& reduced);

/// Loose core by direct fixpoint deletion on the hypergraph: edges with
/// connection number < 2 are removed in batch sweeps until none remain.
/// The result's vertex set is implicit (every vertex of the core lies in a
/// surviving edge); an empty edge set means the core is empty.
Hypergraph loose_core_direct(const Hypergraph& h);

/// Loose core reconstructed from the reduced core of the factor graph of h:
/// the full original edges of all surviving factor nodes.
Hypergraph loose_core_from_reduced(const Hypergraph& h, const CoreResult& reduced);

struct PruneResult {
  std::size_t surviving_children = 0;  // root children left after pruning
  std::size_t adjusted = 0;            // same, with a lone child counted as 0
};

/// Bottom-up pruning of a depth-(ell+1) ball: starting from the deepest
/// layer, repeatedly delete nodes with no surviving neighbor in the layer
/// below, and return how many children of the root survive. The ball must
/// not be truncated.
PruneResult core_construct(const FactorGraph& g, const LayeredNeighborhood& ball,
                           unsigned ell);

/// Checks the relation between the degree after `ell` synchronous peeling
/// rounds and the prune count of the depth-(ell+1) ball: on a tree ball the
/// two agree, except that a prune count of 1 only upper-bounds the peeled
/// degree. Not applicable when the ball contains a cycle.
struct PeelRelationReport {
  bool applicable = false;  // ball is a tree
  std::uint32_t peeled_degree = 0;
  std::size_t surviving_children = 0;
  bool holds = false;
};

PeelRelationReport verify_peel_relation(const FactorGraph& g, std::uint32_t node,
                                        unsigned ell);

/// CSV dump "node_id,node_type,round_disabled" of per-round disabling labels.
void write_disabling_csv(const CoreResult& result, std::ostream& out);

}  // namespace loosecore
