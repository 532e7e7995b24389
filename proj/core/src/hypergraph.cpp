#include "loosecore/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "loosecore/errors.hpp"
#include "loosecore/mathutil.hpp"

namespace loosecore {

namespace {

void check_model_ranges(unsigned r, std::uint32_t n, double p) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  if (n < r) throw InvalidParams("vertex count n must be at least r");
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw InvalidParams("edge probability must lie in [0, 1]");
  }
}

}  // namespace

ModelParams ModelParams::from_degree(unsigned r, std::uint32_t n, double d,
                                     std::uint64_t seed) {
  ModelParams params;
  params.r = r;
  params.n = n;
  params.d = d;
  params.p = edge_probability(r, n, d);
  params.seed = seed;
  return params;
}

ModelParams ModelParams::from_probability(unsigned r, std::uint32_t n, double p,
                                          std::uint64_t seed) {
  check_model_ranges(r, n, p);
  ModelParams params;
  params.r = r;
  params.n = n;
  params.p = p;
  params.d = p * binomial_real(static_cast<double>(n) - 1.0, r - 1.0);
  params.seed = seed;
  return params;
}

void ModelParams::validate() const {
  check_model_ranges(r, n, p);
  // d = 0 (and hence p = 0) is allowed as the degenerate edgeless model.
  if (!(d >= 0.0)) throw InvalidParams("degree parameter d must be non-negative");
  if (d == 0.0 && p > 0.0) throw InvalidParams("inconsistent (d, p) pair");
}

double edge_probability(unsigned r, std::uint32_t n, double d) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  if (n < r) throw InvalidParams("vertex count n must be at least r");
  if (!(d > 0.0)) throw InvalidParams("degree parameter d must be positive");

  const std::uint64_t exact = binomial_u64(n - 1, r - 1);
  double p;
  if (exact != 0) {
    p = d / static_cast<double>(exact);
  } else {
    // C(n-1, r-1) overflows 64 bits; evaluate the quotient in log space.
    p = std::exp(std::log(d) -
                 log_binomial(static_cast<double>(n) - 1.0, r - 1.0));
  }
  if (p > 1.0) {
    throw ProbabilityOverflow("d exceeds C(n-1, r-1); edge probability > 1");
  }
  return p;
}

std::size_t Hypergraph::EdgeKeyHash::operator()(
    const std::vector<std::uint32_t>& e) const noexcept {
  // FNV-1a over the vertex words
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t v : e) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Hypergraph::Hypergraph(std::uint32_t n, unsigned r) : n_(n), r_(r) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  degree_.assign(n, 0);
}

std::span<const std::uint32_t> Hypergraph::edge(std::size_t index) const {
  if (index >= edge_count()) throw EdgeOutOfRange("edge index out of range");
  return {flat_.data() + index * r_, r_};
}

void Hypergraph::add_edge(std::span<const std::uint32_t> vertices) {
  if (vertices.size() != r_) {
    throw InvalidParams("edge must contain exactly r vertices");
  }
  std::vector<std::uint32_t> key(vertices.begin(), vertices.end());
  std::sort(key.begin(), key.end());
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] >= n_) throw VertexOutOfRange("edge vertex out of range");
    if (i > 0 && key[i] == key[i - 1]) {
      throw InvalidParams("edge vertices must be distinct");
    }
  }
  if (index_.contains(key)) throw InvalidParams("duplicate edge");

  index_.emplace(key, edge_count());
  for (std::uint32_t v : key) ++degree_[v];
  flat_.insert(flat_.end(), key.begin(), key.end());
}

void Hypergraph::add_edge(std::initializer_list<std::uint32_t> vertices) {
  add_edge(std::span<const std::uint32_t>(vertices.begin(), vertices.size()));
}

bool Hypergraph::has_edge(std::span<const std::uint32_t> sorted_vertices) const {
  if (sorted_vertices.size() != r_) return false;
  std::vector<std::uint32_t> key(sorted_vertices.begin(), sorted_vertices.end());
  return index_.contains(key);
}

std::uint32_t Hypergraph::degree(std::uint32_t v) const {
  if (v >= n_) throw VertexOutOfRange("vertex out of range");
  return degree_[v];
}

unsigned Hypergraph::connection_number(std::size_t index) const {
  auto e = edge(index);  // throws EdgeOutOfRange
  unsigned kappa = 0;
  for (std::uint32_t v : e) {
    if (degree_[v] >= 2) ++kappa;
  }
  return kappa;
}

unsigned Hypergraph::kappa_min() const {
  if (edge_count() == 0) {
    throw EmptyEdgeSet("connection number undefined on an edgeless hypergraph");
  }
  unsigned best = r_ + 1;
  for (std::size_t i = 0; i < edge_count(); ++i) {
    best = std::min(best, connection_number(i));
  }
  return best;
}

std::vector<std::vector<std::uint32_t>> Hypergraph::sorted_edges() const {
  std::vector<std::vector<std::uint32_t>> edges;
  edges.reserve(edge_count());
  for (std::size_t i = 0; i < edge_count(); ++i) {
    auto e = edge(i);
    edges.emplace_back(e.begin(), e.end());
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool Hypergraph::same_edge_set(const Hypergraph& other) const {
  return r_ == other.r_ && sorted_edges() == other.sorted_edges();
}

void Hypergraph::reserve(std::size_t edges) {
  flat_.reserve(edges * r_);
  index_.reserve(edges);
}

std::uint64_t sample_binomial(double trials, double p, Rng& rng) {
  if (trials < 0.0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw InvalidParams("invalid binomial parameters");
  }
  if (p == 0.0 || trials == 0.0) return 0;
  if (p == 1.0) return static_cast<std::uint64_t>(trials);

  const double u = rng.unit();
  const double mean = trials * p;
  const double sd = std::sqrt(mean * (1.0 - p));
  // Mass below mean - 60 sd is far under the double rounding floor, so the
  // inverse CDF can start accumulating there.
  double k = std::max(0.0, std::floor(mean - 60.0 * sd - 60.0));
  const double log_gamma_trials = std::lgamma(trials + 1.0);
  const double log_p = std::log(p);
  const double log_1mp = std::log1p(-p);
  double cdf = 0.0;
  while (true) {
    const double log_pmf = log_gamma_trials - std::lgamma(k + 1.0) -
                           std::lgamma(trials - k + 1.0) + k * log_p +
                           (trials - k) * log_1mp;
    cdf += std::exp(log_pmf);
    if (cdf > u) break;
    if (k >= trials) break;
    if (k > mean && log_pmf < -745.0) break;  // past any representable mass
    k += 1.0;
  }
  return static_cast<std::uint64_t>(k);
}

namespace {

// All r-subsets of [0, n), lexicographic.
void enumerate_r_sets(std::uint32_t n, unsigned r,
                      std::vector<std::vector<std::uint32_t>>& out) {
  std::vector<std::uint32_t> cur(r);
  for (unsigned i = 0; i < r; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(r) - 1;
    while (i >= 0 && cur[i] == n - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (unsigned j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

Hypergraph sample_hypergraph(const ModelParams& params) {
  params.validate();
  const std::uint32_t n = params.n;
  const unsigned r = params.r;
  Rng rng(params.seed);

  // Exact edge-set size when it fits 64 bits; the log-space value otherwise.
  const std::uint64_t exact_total = binomial_u64(n, r);
  const double total = exact_total != 0
                           ? static_cast<double>(exact_total)
                           : binomial_real(static_cast<double>(n), r);
  std::uint64_t m;
  if (params.p >= 1.0) {
    if (exact_total == 0) {
      throw InstanceTooLarge("p = 1 requires an enumerable edge set");
    }
    m = exact_total;
  } else {
    m = sample_binomial(total, params.p, rng);
  }

  Hypergraph h(n, r);
  h.reserve(m);

  if (static_cast<double>(m) > 0.5 * total) {
    // Dense regime: rejection would thrash, so select a uniform m-subset of
    // the full edge list by partial shuffle instead.
    if (total > 5e7) {
      throw InstanceTooLarge("edge probability too close to 1 to enumerate");
    }
    std::vector<std::vector<std::uint32_t>> all;
    all.reserve(static_cast<std::size_t>(total));
    enumerate_r_sets(n, r, all);
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.below(all.size() - i);
      std::swap(all[i], all[j]);
      h.add_edge(all[i]);
    }
    return h;
  }

  std::vector<std::uint32_t> edge(r);
  while (h.edge_count() < m) {
    for (unsigned i = 0; i < r; ++i) {
      std::uint32_t v;
      bool fresh;
      do {
        v = static_cast<std::uint32_t>(rng.below(n));
        fresh = true;
        for (unsigned j = 0; j < i; ++j) {
          if (edge[j] == v) {
            fresh = false;
            break;
          }
        }
      } while (!fresh);
      edge[i] = v;
    }
    std::sort(edge.begin(), edge.end());
    if (!h.has_edge(edge)) h.add_edge(edge);
  }
  return h;
}

Hypergraph make_loose_cycle(unsigned r, std::size_t length) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  if (length < 2) throw InvalidParams("loose cycles have length at least 2");
  // For graphs a 2-cycle would be a double edge, which simple graphs forbid.
  if (r == 2 && length < 3) {
    throw InvalidParams("graph cycles need length at least 3");
  }
  const std::uint32_t n = static_cast<std::uint32_t>(length * (r - 1));
  Hypergraph h(n, r);
  std::vector<std::uint32_t> edge(r);
  for (std::size_t i = 0; i < length; ++i) {
    for (unsigned j = 0; j < r; ++j) {
      edge[j] = static_cast<std::uint32_t>((i * (r - 1) + j) % n);
    }
    h.add_edge(edge);
  }
  return h;
}

Hypergraph make_loose_path(unsigned r, std::size_t length) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  if (length < 1) throw InvalidParams("loose paths have length at least 1");
  const std::uint32_t n = static_cast<std::uint32_t>(length * (r - 1) + 1);
  Hypergraph h(n, r);
  std::vector<std::uint32_t> edge(r);
  for (std::size_t i = 0; i < length; ++i) {
    for (unsigned j = 0; j < r; ++j) {
      edge[j] = static_cast<std::uint32_t>(i * (r - 1) + j);
    }
    h.add_edge(edge);
  }
  return h;
}

void save_hypergraph(const Hypergraph& h, std::ostream& out) {
  out << h.uniformity() << ' ' << h.vertex_count() << ' ' << h.edge_count()
      << '\n';
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (j) out << ' ';
      out << e[j];
    }
    out << '\n';
  }
}

Hypergraph load_hypergraph(std::istream& in) {
  unsigned r = 0;
  std::uint32_t n = 0;
  std::size_t m = 0;
  if (!(in >> r >> n >> m)) throw IoError("malformed hypergraph header");
  if (r < 2 || n < r) throw IoError("invalid hypergraph header values");
  Hypergraph h(n, r);
  h.reserve(m);
  std::vector<std::uint32_t> edge(r);
  for (std::size_t i = 0; i < m; ++i) {
    for (unsigned j = 0; j < r; ++j) {
      if (!(in >> edge[j])) throw IoError("truncated hypergraph edge list");
    }
    try {
      h.add_edge(edge);
    } catch (const Error& e) {
      throw IoError(std::string("invalid edge in hypergraph file: ") + e.what());
    }
  }
  return h;
}

void save_hypergraph_file(const Hypergraph& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  save_hypergraph(h, out);
  if (!out) throw IoError("write failed: " + path);
}

Hypergraph load_hypergraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return load_hypergraph(in);
}

}  // namespace loosecore
