#include "loosecore/extremal.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "loosecore/errors.hpp"
#include "loosecore/hypergraph.hpp"

namespace loosecore {

namespace {

// Pairwise |e_i intersect e_j| over sorted edges.
std::vector<std::vector<unsigned>> intersection_table(const Hypergraph& h) {
  const std::size_t m = h.edge_count();
  std::vector<std::vector<unsigned>> table(m, std::vector<unsigned>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    auto a = h.edge(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      auto b = h.edge(j);
      unsigned count = 0;
      std::size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x] < b[y]) {
          ++x;
        } else if (a[x] > b[y]) {
          ++y;
        } else {
          ++count;
          ++x;
          ++y;
        }
      }
      table[i][j] = table[j][i] = count;
    }
  }
  return table;
}

struct Search {
  const Hypergraph* h;
  const std::vector<std::vector<unsigned>>* inter;
  std::size_t m;
  std::vector<std::size_t> seq;
  std::vector<char> used;
  std::size_t best = 0;

  // A valid continuation shares exactly one vertex with the last edge and
  // none with any earlier edge in the sequence.
  bool extends_path(std::size_t j) const {
    if ((*inter)[seq.back()][j] != 1) return false;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      if ((*inter)[seq[k]][j] != 0) return false;
    }
    return true;
  }

  void dfs_path() {
    best = std::max(best, seq.size());
    if (best == m) return;  // nothing longer exists
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || !extends_path(j)) continue;
      used[j] = 1;
      seq.push_back(j);
      dfs_path();
      seq.pop_back();
      used[j] = 0;
    }
  }

  // Distinct-vertex count of the sequence plus a closing edge must be
  // exactly len*(r-1) for a loose cycle; this rejects degenerate closures
  // such as three edges through one common vertex.
  bool union_size_matches(std::size_t closing) const {
    std::vector<std::uint32_t> verts;
    verts.reserve((seq.size() + 1) * h->uniformity());
    for (std::size_t e : seq) {
      auto ed = h->edge(e);
      verts.insert(verts.end(), ed.begin(), ed.end());
    }
    auto ed = h->edge(closing);
    verts.insert(verts.end(), ed.begin(), ed.end());
    std::sort(verts.begin(), verts.end());
    const std::size_t distinct =
        std::unique(verts.begin(), verts.end()) - verts.begin();
    return distinct == (seq.size() + 1) * (h->uniformity() - 1);
  }

  // Cycles are rooted at their smallest edge index, and the orientation is
  // fixed by requiring the successor of the root to precede the predecessor.
  void dfs_cycle(std::size_t root) {
    const std::size_t last = seq.back();
    for (std::size_t j = root + 1; j < m; ++j) {
      if (used[j]) continue;
      const unsigned with_root = (*inter)[root][j];
      const unsigned with_last = (*inter)[last][j];
      if (with_last != 1) continue;
      bool middle_clear = true;
      for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
        if ((*inter)[seq[k]][j] != 0) {
          middle_clear = false;
          break;
        }
      }
      if (!middle_clear) continue;
      if (with_root == 1 && seq.size() >= 2 && seq[1] < j &&
          union_size_matches(j)) {
        best = std::max(best, seq.size() + 1);
      }
      // Only middle edges must avoid the root; the second edge of the cycle
      // is the root's successor and legitimately touches it.
      if (with_root == 0 || (seq.size() == 1 && with_root == 1)) {
        used[j] = 1;
        seq.push_back(j);
        dfs_cycle(root);
        seq.pop_back();
        used[j] = 0;
      }
    }
  }
};

Search make_search(const Hypergraph& h, std::size_t edge_cap,
                   const std::vector<std::vector<unsigned>>& inter) {
  if (h.edge_count() > edge_cap) {
    throw InstanceTooLarge("edge count exceeds the brute-force cap");
  }
  Search s;
  s.h = &h;
  s.inter = &inter;
  s.m = h.edge_count();
  s.used.assign(s.m, 0);
  return s;
}

}  // namespace

std::size_t brute_force_longest_path(const Hypergraph& h, std::size_t edge_cap) {
  if (h.edge_count() == 0) return 0;
  const auto inter = intersection_table(h);
  Search s = make_search(h, edge_cap, inter);
  for (std::size_t start = 0; start < s.m; ++start) {
    s.seq.assign(1, start);
    s.used.assign(s.m, 0);
    s.used[start] = 1;
    s.dfs_path();
  }
  return s.best;
}

std::size_t brute_force_longest_cycle(const Hypergraph& h, std::size_t edge_cap) {
  if (h.edge_count() < 2) return 0;
  const auto inter = intersection_table(h);
  Search s = make_search(h, edge_cap, inter);
  // Length 2: two edges overlapping in exactly two vertices.
  for (std::size_t i = 0; i < s.m && s.best < 2; ++i) {
    for (std::size_t j = i + 1; j < s.m; ++j) {
      if (inter[i][j] == 2) {
        s.best = 2;
        break;
      }
    }
  }
  for (std::size_t root = 0; root + 2 < s.m; ++root) {
    s.seq.assign(1, root);
    s.used.assign(s.m, 0);
    s.used[root] = 1;
    s.dfs_cycle(root);
  }
  return s.best;
}

}  // namespace loosecore
