#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "loosecore/rng.hpp"

namespace loosecore {

/// Parameters of the binomial random hypergraph model: each of the C(n, r)
/// possible edges is present independently with probability
/// p = d / C(n-1, r-1), so d is the expected vertex degree.
struct ModelParams {
  unsigned r = 3;
  std::uint32_t n = 0;
  double d = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;

  static ModelParams from_degree(unsigned r, std::uint32_t n, double d,
                                 std::uint64_t seed);
  static ModelParams from_probability(unsigned r, std::uint32_t n, double p,
                                      std::uint64_t seed);
  void validate() const;
};

/// An r-uniform hypergraph on vertices 0..n-1. Edges are stored with their
/// vertices sorted; duplicate edges are rejected, so the hypergraph is
/// always simple. Immutable use after construction is thread-safe.
class Hypergraph {
 public:
  Hypergraph(std::uint32_t n, unsigned r);

  std::uint32_t vertex_count() const { return n_; }
  unsigned uniformity() const { return r_; }
  std::size_t edge_count() const { return flat_.size() / r_; }

  std::span<const std::uint32_t> edge(std::size_t index) const;

  /// Inserts an edge (vertices in any order). Throws InvalidParams on a
  /// malformed or duplicate edge.
  void add_edge(std::span<const std::uint32_t> vertices);
  void add_edge(std::initializer_list<std::uint32_t> vertices);

  bool has_edge(std::span<const std::uint32_t> sorted_vertices) const;

  /// Number of edges containing v.
  std::uint32_t degree(std::uint32_t v) const;
  const std::vector<std::uint32_t>& degrees() const { return degree_; }

  /// Connection number: how many vertices of edge `index` have degree >= 2.
  unsigned connection_number(std::size_t index) const;

  /// Minimum connection number over all edges; throws EmptyEdgeSet if there
  /// are none.
  unsigned kappa_min() const;

  /// Edge list sorted lexicographically, for order-insensitive comparison.
  std::vector<std::vector<std::uint32_t>> sorted_edges() const;
  bool same_edge_set(const Hypergraph& other) const;

  void reserve(std::size_t edges);

 private:
  struct EdgeKeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& e) const noexcept;
  };

  std::uint32_t n_;
  unsigned r_;
  std::vector<std::uint32_t> flat_;  // edge i occupies [i*r, (i+1)*r), sorted
  std::vector<std::uint32_t> degree_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, EdgeKeyHash>
      index_;
};

/// p = d / C(n-1, r-1), evaluated in log space when the binomial coefficient
/// overflows 64-bit integers. Throws ProbabilityOverflow if the quotient
/// exceeds 1.
double edge_probability(unsigned r, std::uint32_t n, double d);

/// Draws from Bi(trials, p) by inverse-CDF in log space (pmf terms via
/// lgamma). `trials` is real-valued so that astronomically large edge-set
/// sizes are representable; the result is exact to double precision.
std::uint64_t sample_binomial(double trials, double p, Rng& rng);

/// Samples H^r(n, p): the edge count is drawn from the exact binomial law,
/// then that many distinct r-sets are chosen uniformly. Deterministic for a
/// fixed seed.
Hypergraph sample_hypergraph(const ModelParams& params);

/// Loose cycle of the given length (>= 2): edges walk around a ring of
/// length*(r-1) vertices, consecutive edges overlapping in one vertex.
Hypergraph make_loose_cycle(unsigned r, std::size_t length);

/// Loose path of the given length (>= 1) on length*(r-1)+1 vertices.
Hypergraph make_loose_path(unsigned r, std::size_t length);

// Text format: header line "r n m", then m lines of r space-separated sorted
// vertex ids. Round-trips exactly.
void save_hypergraph(const Hypergraph& h, std::ostream& out);
Hypergraph load_hypergraph(std::istream& in);
void save_hypergraph_file(const Hypergraph& h, const std::string& path);
Hypergraph load_hypergraph_file(const std::string& path);

}  // namespace loosecore
