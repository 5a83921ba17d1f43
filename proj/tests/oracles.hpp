#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include "homdist/graph.hpp"
#include "homdist/isomorphism.hpp"
#include "homdist/numeric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracles {

/// graph6 decoder written directly from the published byte layout,
/// independent of homdist::parse_graph6.
inline homdist::Graph decode_graph6_reference(const std::string& s) {
  std::vector<int> data;
  for (char c : s) {
    if (c == '\n' || c == '\r') break;
    data.push_back(static_cast<unsigned char>(c) - 63);
  }
  std::size_t p = 0;
  long long n;
  if (data[0] != 63) {
    n = data[0];
    p = 1;
  } else {
    n = (static_cast<long long>(data[1]) << 12) + (data[2] << 6) + data[3];
    p = 4;
  }
  std::vector<int> bits;
  for (std::size_t i = p; i < data.size(); ++i)
    for (int b = 5; b >= 0; --b) bits.push_back((data[i] >> b) & 1);
  homdist::Graph g(static_cast<int>(n));
  std::size_t k = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++k)
      if (bits.at(k)) g.add_edge(i, j);
  return g;
}

/// Isomorphism by brute force over all |V|! bijections.
inline std::optional<std::vector<int>> brute_force_isomorphism(const homdist::Graph& g, const homdist::Graph& h) {
  int n = g.vertex_count();
  if (h.vertex_count() != n) return std::nullopt;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      for (int v = u; v < n && ok; ++v)
        if (g.adjacent(u, v) != h.adjacent(perm[u], perm[v])) ok = false;
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

/// Treewidth by plain recursion over all elimination orderings (no
/// memoization, no subset DP).
inline int brute_force_treewidth(const homdist::Graph& g) {
  int n = g.vertex_count();
  if (n == 0) return -1;
  std::vector<std::set<int>> adj(n);
  for (auto [u, v] : g.edges())
    if (u != v) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
  std::vector<char> gone(n, 0);
  int best = n;
  auto rec = [&](auto&& self, std::vector<std::set<int>>& a, int eliminated, int width) -> void {
    if (width >= best) return;
    if (eliminated == n) {
      best = width;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      int deg = static_cast<int>(a[v].size());
      auto saved = a;
      for (int x : saved[v]) a[x].erase(v);
      for (int x : saved[v])
        for (int y : saved[v])
          if (x != y) a[x].insert(y);
      a[v].clear();
      gone[v] = 1;
      self(self, a, eliminated + 1, std::max(width, deg));
      gone[v] = 0;
      a = saved;
    }
  };
  rec(rec, adj, 0, -1);
  return best;
}

/// Outerplanarity by exhaustive search for a cyclic vertex order in which no
/// two edges interleave (all vertices on one face).
inline bool cyclic_order_outerplanar(const homdist::Graph& g) {
  int n = g.vertex_count();
  if (n <= 3) return true;
  std::vector<int> rest;
  for (int v = 1; v < n; ++v) rest.push_back(v);
  auto crossing = [&](const std::vector<int>& pos) {
    auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        int a = pos[edges[i].first], b = pos[edges[i].second];
        int c = pos[edges[j].first], d = pos[edges[j].second];
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        bool c_inside = a < c && c < b, d_inside = a < d && d < b;
        if (c == a || c == b || d == a || d == b) continue;  // shared endpoint
        if (c_inside != d_inside) return true;
      }
    return false;
  };
  do {
    std::vector<int> order{0};
    order.insert(order.end(), rest.begin(), rest.end());
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    if (!crossing(pos)) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

/// Homomorphism count by a flat base-|V(G)| counter over all maps with a
/// full edge check per map (no pruning, no ordering heuristics).
inline homdist::Integer flat_hom_count(const homdist::Graph& f, const homdist::Graph& g) {
  int nf = f.vertex_count(), ng = g.vertex_count();
  if (nf == 0) return 1;
  if (ng == 0) return 0;
  homdist::Integer count = 0;
  std::vector<int> img(nf, 0);
  for (;;) {
    bool ok = true;
    for (auto [u, v] : f.edges())
      if (!g.adjacent(img[u], img[v])) {
        ok = false;
        break;
      }
    if (ok) ++count;
    int i = nf - 1;
    while (i >= 0 && img[i] == ng - 1) img[i--] = 0;
    if (i < 0) break;
    ++img[i];
  }
  return count;
}

/// Non-isomorphic graphs on exactly n vertices, by augmenting the list for
/// n-1 with a fresh vertex and every neighborhood, deduplicating by
/// canonical key.
inline std::vector<homdist::Graph> all_graphs(int n) {
  std::vector<homdist::Graph> current{homdist::Graph(0)};
  for (int k = 1; k <= n; ++k) {
    std::map<std::string, homdist::Graph> next;
    for (const auto& g : current) {
      for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
        homdist::Graph bigger(k);
        for (auto [u, v] : g.edges()) bigger.add_edge(u, v);
        for (int u = 0; u < k - 1; ++u)
          if (mask & (1u << u)) bigger.add_edge(u, k - 1);
        next.emplace(homdist::canonical_key(bigger), bigger);
      }
    }
    current.clear();
    for (auto& [key, g] : next) current.push_back(g);
  }
  return current;
}

/// Non-isomorphic graphs on at most n vertices.
inline std::vector<homdist::Graph> all_graphs_up_to(int n) {
  std::vector<homdist::Graph> out;
  for (int k = 1; k <= n; ++k) {
    auto gs = all_graphs(k);
    out.insert(out.end(), gs.begin(), gs.end());
  }
  return out;
}

}  // namespace oracles
