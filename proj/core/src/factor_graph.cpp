#include "loosecore/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "loosecore/errors.hpp"
#include "loosecore/hypergraph.hpp"

namespace loosecore {

FactorGraph FactorGraph::from_hypergraph(const Hypergraph& h) {
  FactorGraph g;
  g.n_ = h.vertex_count();
  g.m_ = static_cast<std::uint32_t>(h.edge_count());
  g.fac_off_.resize(g.m_ + 1);
  g.fac_adj_.reserve(h.edge_count() * h.uniformity());
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    g.fac_off_[i] = static_cast<std::uint32_t>(g.fac_adj_.size());
    auto e = h.edge(i);
    g.fac_adj_.insert(g.fac_adj_.end(), e.begin(), e.end());
  }
  g.fac_off_[g.m_] = static_cast<std::uint32_t>(g.fac_adj_.size());
  g.build_variable_side();
  return g;
}

FactorGraph::FactorGraph(
    std::uint32_t variable_count,
    const std::vector<std::vector<std::uint32_t>>& factor_neighbors)
    : n_(variable_count), m_(static_cast<std::uint32_t>(factor_neighbors.size())) {
  fac_off_.resize(m_ + 1);
  for (std::size_t f = 0; f < factor_neighbors.size(); ++f) {
    fac_off_[f] = static_cast<std::uint32_t>(fac_adj_.size());
    for (std::uint32_t v : factor_neighbors[f]) {
      if (v >= n_) throw VertexOutOfRange("factor neighbor out of range");
      fac_adj_.push_back(v);
    }
  }
  fac_off_[m_] = static_cast<std::uint32_t>(fac_adj_.size());
  build_variable_side();
}

void FactorGraph::build_variable_side() {
  std::vector<std::uint32_t> counts(n_, 0);
  for (std::uint32_t v : fac_adj_) ++counts[v];
  var_off_.assign(n_ + 1, 0);
  for (std::uint32_t v = 0; v < n_; ++v) var_off_[v + 1] = var_off_[v] + counts[v];
  var_adj_.resize(fac_adj_.size());
  var_inc_.resize(fac_adj_.size());
  std::vector<std::uint32_t> cursor(var_off_.begin(), var_off_.end() - 1);
  for (std::uint32_t f = 0; f < m_; ++f) {
    for (std::uint32_t e = fac_off_[f]; e < fac_off_[f + 1]; ++e) {
      const std::uint32_t v = fac_adj_[e];
      var_adj_[cursor[v]] = n_ + f;
      var_inc_[cursor[v]] = e;
      ++cursor[v];
    }
  }
}

std::span<const std::uint32_t> FactorGraph::neighbors(std::uint32_t node) const {
  if (node >= node_count()) throw NodeOutOfRange("node id out of range");
  if (node < n_) {
    return {var_adj_.data() + var_off_[node], var_off_[node + 1] - var_off_[node]};
  }
  const std::uint32_t f = node - n_;
  return {fac_adj_.data() + fac_off_[f], fac_off_[f + 1] - fac_off_[f]};
}

std::pair<std::uint32_t, std::uint32_t> FactorGraph::factor_incidence_range(
    std::uint32_t factor) const {
  if (factor >= m_) throw NodeOutOfRange("factor index out of range");
  return {fac_off_[factor], fac_off_[factor + 1]};
}

std::span<const std::uint32_t> FactorGraph::variable_incidences(
    std::uint32_t v) const {
  if (v >= n_) throw NodeOutOfRange("variable index out of range");
  return {var_inc_.data() + var_off_[v], var_off_[v + 1] - var_off_[v]};
}

PlainnessReport is_r_plain(const FactorGraph& g) {
  PlainnessReport report;
  std::map<std::vector<std::uint32_t>, std::uint32_t> seen;
  std::vector<std::uint32_t> key;
  for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
    auto nb = g.neighbors(g.variable_count() + f);
    key.assign(nb.begin(), nb.end());
    std::sort(key.begin(), key.end());
    for (std::size_t i = 1; i < key.size(); ++i) {
      if (key[i] == key[i - 1]) {
        report.ok = false;
        report.violation = PlainnessReport::Violation::double_edge;
        report.factor_a = g.variable_count() + f;
        report.variable = key[i];
        return report;
      }
    }
    auto [it, inserted] = seen.emplace(key, f);
    if (!inserted) {
      report.ok = false;
      report.violation = PlainnessReport::Violation::duplicate_factors;
      report.factor_a = g.variable_count() + it->second;
      report.factor_b = g.variable_count() + f;
      return report;
    }
  }
  return report;
}

LayeredNeighborhood bfs_layers(const FactorGraph& g, std::uint32_t root,
                               unsigned depth, std::size_t node_cap) {
  if (root >= g.node_count()) throw NodeOutOfRange("BFS root out of range");
  if (depth < 1) throw InvalidParams("BFS depth must be at least 1");
  if (node_cap < 1) throw InvalidParams("BFS node cap must be at least 1");

  LayeredNeighborhood out;
  out.root = root;
  out.depth = depth;
  out.layers.assign(depth + 1, {});
  out.layers[0] = {root};

  std::unordered_map<std::uint32_t, unsigned> dist;
  dist.emplace(root, 0);
  std::size_t total = 1;

  for (unsigned t = 1; t <= depth; ++t) {
    for (std::uint32_t u : out.layers[t - 1]) {
      for (std::uint32_t v : g.neighbors(u)) {
        if (dist.emplace(v, t).second) {
          out.parent.emplace(v, u);
          out.layers[t].push_back(v);
        }
      }
    }
    total += out.layers[t].size();
    if (total > node_cap) {
      out.truncated = true;
      break;
    }
    if (out.layers[t].empty()) break;  // component exhausted
  }

  // Any cycle inside the explored ball shows up as a surplus edge. Each
  // in-ball edge is seen from both endpoints.
  std::size_t half_edges = 0;
  for (const auto& [u, du] : dist) {
    for (std::uint32_t v : g.neighbors(u)) {
      if (dist.contains(v)) ++half_edges;
    }
  }
  out.is_tree = half_edges == 2 * (dist.size() - 1);
  return out;
}

LayeredNeighborhood bfs_layers(const FactorGraph& g, std::uint32_t root,
                               unsigned depth) {
  return bfs_layers(g, root, depth, default_node_cap(g));
}

std::size_t default_node_cap(const FactorGraph& g) {
  const double logn = std::log(std::max<std::uint32_t>(g.node_count(), 3));
  return static_cast<std::size_t>(std::ceil(logn * logn));
}

}  // namespace loosecore
