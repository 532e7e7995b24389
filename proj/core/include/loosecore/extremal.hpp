#pragma once

#include <cstddef>

namespace loosecore {

class Hypergraph;

inline constexpr std::size_t kDefaultExtremalEdgeCap = 18;

/// Exact longest loose path length by exhaustive search over edge sequences
/// (consecutive edges share exactly one vertex, all other pairs are
/// disjoint). Returns 0 on an edgeless hypergraph. Throws InstanceTooLarge
/// above edge_cap edges.
std::size_t brute_force_longest_path(
    const Hypergraph& h, std::size_t edge_cap = kDefaultExtremalEdgeCap);

/// Exact longest loose cycle length (>= 2; length 2 means two edges sharing
/// exactly two vertices). Returns 0 if no loose cycle exists.
std::size_t brute_force_longest_cycle(
    const Hypergraph& h, std::size_t edge_cap = kDefaultExtremalEdgeCap);

}  // namespace loosecore
