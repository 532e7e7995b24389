#include "loosecore/cores.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <unordered_set>

#include "loosecore/errors.hpp"
#include "loosecore/hypergraph.hpp"

namespace loosecore {

PeelState::PeelState(const FactorGraph& g) : g_(&g) {
  deg_.resize(g.node_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) deg_[u] = g.degree(u);
  disabled_round_.assign(g.node_count(), 0);
  alive_.assign(g.incidence_count(), 1);
  live_edges_ = g.incidence_count();
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    if (deg_[u] == 1) candidates_.push_back(u);
  }
}

void PeelState::remove_incidences_of(std::uint32_t node) {
  const std::uint32_t n = g_->variable_count();
  if (node < n) {
    auto incs = g_->variable_incidences(node);
    auto nbs = g_->neighbors(node);
    for (std::size_t i = 0; i < incs.size(); ++i) {
      const std::uint32_t e = incs[i];
      if (!alive_[e]) continue;
      alive_[e] = 0;
      --live_edges_;
      --deg_[node];
      const std::uint32_t other = nbs[i];
      if (--deg_[other] == 1) next_candidates_.push_back(other);
    }
  } else {
    auto [first, last] = g_->factor_incidence_range(node - n);
    for (std::uint32_t e = first; e < last; ++e) {
      if (!alive_[e]) continue;
      alive_[e] = 0;
      --live_edges_;
      --deg_[node];
      const std::uint32_t other = g_->incident_variable(e);
      if (--deg_[other] == 1) next_candidates_.push_back(other);
    }
  }
}

bool PeelState::step() {
  ++round_;
  // The degree-1 set is fixed before any removal, so both endpoints of a
  // pendant-pendant edge fall in the same round.
  std::vector<std::uint32_t> selected;
  selected.reserve(candidates_.size());
  for (std::uint32_t u : candidates_) {
    if (deg_[u] == 1) selected.push_back(u);
  }
  if (selected.empty()) {
    candidates_.clear();
    fixpoint_ = true;
    return true;
  }
  next_candidates_.clear();
  for (std::uint32_t u : selected) disabled_round_[u] = round_;
  for (std::uint32_t u : selected) remove_incidences_of(u);
  ++effective_rounds_;
  candidates_.swap(next_candidates_);
  return false;
}

namespace {

CoreResult result_from_degrees(const FactorGraph& g,
                               std::vector<std::uint32_t> degrees) {
  CoreResult r;
  r.variable_count = g.variable_count();
  r.factor_count = g.factor_count();
  r.reduced_degree = std::move(degrees);
  for (std::uint32_t v = 0; v < g.variable_count(); ++v) {
    if (r.reduced_degree[v] > 0) {
      ++r.nonisolated_variables;
      r.reduced_edge_count += r.reduced_degree[v];
    }
  }
  for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
    if (r.reduced_degree[g.variable_count() + f] > 0) ++r.nonisolated_factors;
  }
  return r;
}

}  // namespace

CoreResult reduced_core(const FactorGraph& g, PeelMode mode) {
  if (mode == PeelMode::synchronous) {
    PeelState state(g);
    while (!state.step()) {
    }
    CoreResult r = result_from_degrees(g, state.degrees());
    r.disabled_round = state.disabled_round();
    r.rounds_to_fixpoint = state.effective_rounds();
    r.has_rounds = true;
    return r;
  }

  // Queue mode: lazy worklist, final degrees only. The fixpoint is the same
  // whatever the removal order.
  std::vector<std::uint32_t> deg(g.node_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) deg[u] = g.degree(u);
  std::vector<char> alive(g.incidence_count(), 1);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    if (deg[u] == 1) stack.push_back(u);
  }
  const std::uint32_t n = g.variable_count();
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    if (deg[u] != 1) continue;
    if (u < n) {
      auto incs = g.variable_incidences(u);
      auto nbs = g.neighbors(u);
      for (std::size_t i = 0; i < incs.size(); ++i) {
        if (!alive[incs[i]]) continue;
        alive[incs[i]] = 0;
        deg[u] = 0;
        if (--deg[nbs[i]] == 1) stack.push_back(nbs[i]);
        break;
      }
    } else {
      auto [first, last] = g.factor_incidence_range(u - n);
      for (std::uint32_t e = first; e < last; ++e) {
        if (!alive[e]) continue;
        alive[e] = 0;
        deg[u] = 0;
        const std::uint32_t v = g.incident_variable(e);
        if (--deg[v] == 1) stack.push_back(v);
        break;
      }
    }
  }
  return result_from_degrees(g, std::move(deg));
}

std::pair<std::vector<double>, std::vector<double>> degrees_after_round(
    const FactorGraph& g, unsigned round) {
  PeelState state(g);
  for (unsigned i = 0; i < round; ++i) {
    if (state.step()) break;
  }
  const auto& deg = state.degrees();
  std::uint32_t max_var = 0;
  std::uint32_t max_fac = 0;
  for (std::uint32_t v = 0; v < g.variable_count(); ++v) {
    max_var = std::max(max_var, deg[v]);
  }
  for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
    max_fac = std::max(max_fac, deg[g.variable_count() + f]);
  }
  std::vector<double> var_hist(max_var + 1, 0.0);
  std::vector<double> fac_hist(max_fac + 1, 0.0);
  for (std::uint32_t v = 0; v < g.variable_count(); ++v) var_hist[deg[v]] += 1.0;
  for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
    fac_hist[deg[g.variable_count() + f]] += 1.0;
  }
  if (g.variable_count() > 0) {
    for (double& x : var_hist) x /= g.variable_count();
  }
  if (g.factor_count() > 0) {
    for (double& x : fac_hist) x /= g.factor_count();
  }
  return {std::move(var_hist), std::move(fac_hist)};
}

CoreResult padded_core_from_reduced(const FactorGraph& g,
                                    const CoreResult& reduced) {
  if (reduced.reduced_degree.size() != g.node_count() ||
      reduced.variable_count != g.variable_count() ||
      reduced.factor_count != g.factor_count()) {
    throw MismatchedInput("core result does not match the factor graph");
  }
  CoreResult out = reduced;
  const std::uint32_t n = g.variable_count();
  out.padded_variable_degree.assign(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    assert(out.reduced_degree[v] != 1);
    if (out.reduced_degree[v] >= 2) {
      out.padded_variable_degree[v] = out.reduced_degree[v];
    }
  }
  // Surviving factors take back their full original edge; an isolated
  // variable adjacent to one becomes a leaf.
  for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
    if (out.reduced_degree[n + f] == 0) continue;
    for (std::uint32_t v : g.neighbors(n + f)) {
      if (out.reduced_degree[v] == 0) out.padded_variable_degree[v] = 1;
    }
  }
  out.has_padded = true;
  return out;
}

Hypergraph loose_core_direct(const Hypergraph& h) {
  const std::size_t m = h.edge_count();
  std::vector<char> alive(m, 1);
  std::vector<std::uint32_t> deg = h.degrees();
  std::vector<std::size_t> kills;
  for (;;) {
    kills.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (!alive[i]) continue;
      unsigned kappa = 0;
      for (std::uint32_t v : h.edge(i)) {
        if (deg[v] >= 2) ++kappa;
      }
      if (kappa < 2) kills.push_back(i);
    }
    if (kills.empty()) break;
    for (std::size_t i : kills) {
      alive[i] = 0;
      for (std::uint32_t v : h.edge(i)) --deg[v];
    }
  }
  Hypergraph core(h.vertex_count(), h.uniformity());
  for (std::size_t i = 0; i < m; ++i) {
    if (alive[i]) core.add_edge(h.edge(i));
  }
  return core;
}

Hypergraph loose_core_from_reduced(const Hypergraph& h, const CoreResult& reduced) {
  if (reduced.reduced_degree.size() !=
      h.vertex_count() + h.edge_count()) {
    throw MismatchedInput("core result does not match the hypergraph");
  }
  Hypergraph core(h.vertex_count(), h.uniformity());
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    if (reduced.reduced_degree[h.vertex_count() + i] > 0) {
      core.add_edge(h.edge(i));
    }
  }
  return core;
}

PruneResult core_construct(const FactorGraph& g, const LayeredNeighborhood& ball,
                           unsigned ell) {
  if (ball.truncated) {
    throw TruncatedNeighborhood("pruning requires an uncapped neighborhood");
  }
  if (ball.depth != ell + 1 || ball.layers.size() != ell + 2) {
    throw InvalidParams("neighborhood depth must equal ell + 1");
  }
  // Survivors of the layer below, initially all of D_{ell+1}. A node at
  // layer t is kept iff some neighbor in layer t+1 survived.
  std::unordered_set<std::uint32_t> surviving(ball.layers[ell + 1].begin(),
                                              ball.layers[ell + 1].end());
  for (unsigned i = 1; i <= ell; ++i) {
    const unsigned t = ell - i + 1;
    std::unordered_set<std::uint32_t> next;
    for (std::uint32_t u : ball.layers[t]) {
      for (std::uint32_t v : g.neighbors(u)) {
        if (surviving.contains(v)) {
          next.insert(u);
          break;
        }
      }
    }
    surviving = std::move(next);
  }
  PruneResult out;
  out.surviving_children = surviving.size();
  out.adjusted = out.surviving_children == 1 ? 0 : out.surviving_children;
  return out;
}

PeelRelationReport verify_peel_relation(const FactorGraph& g, std::uint32_t node,
                                        unsigned ell) {
  auto ball = bfs_layers(g, node, ell + 1, g.node_count());
  PeelRelationReport report;
  report.applicable = ball.is_tree;
  auto prune = core_construct(g, ball, ell);
  report.surviving_children = prune.surviving_children;

  PeelState state(g);
  for (unsigned i = 0; i < ell; ++i) {
    if (state.step()) break;
  }
  report.peeled_degree = state.degrees()[node];

  if (report.applicable) {
    if (prune.surviving_children == 1) {
      report.holds = report.peeled_degree <= 1;
    } else {
      report.holds = report.peeled_degree == prune.surviving_children;
    }
  }
  return report;
}

void write_disabling_csv(const CoreResult& result, std::ostream& out) {
  if (!result.has_rounds) {
    throw InvalidParams("disabling rounds require synchronous peeling");
  }
  out << "node_id,node_type,round_disabled\n";
  for (std::size_t u = 0; u < result.disabled_round.size(); ++u) {
    const bool variable = u < result.variable_count;
    out << u << ',' << (variable ? "variable" : "factor") << ','
        << result.disabled_round[u] << '\n';
  }
}

}  // namespace loosecore
