#pragma once

#include "homdist/graph.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace homdist {

/// Cai–Fürer–Immerman gadget pair over a connected base graph with minimum
/// degree 2: the even (untwisted) graph and the odd graph where exactly one
/// base edge is twisted. The pair is non-isomorphic with equal degree
/// sequences. Vertex numbering is fixed by sorted gadget enumeration.
inline std::pair<Graph, Graph> cfi_pair(const Graph& base) {
  int n = base.vertex_count();
  if (n == 0) throw std::invalid_argument("cfi_pair: empty base");
  if (base.has_any_loop()) throw std::invalid_argument("cfi_pair: base must be simple");
  if (!is_connected(base)) throw std::invalid_argument("cfi_pair: base must be connected");
  for (int v = 0; v < n; ++v)
    if (base.degree(v) < 2) throw std::invalid_argument("cfi_pair: base must have minimum degree 2");

  // incident edges of each vertex, by sorted edge-list index
  std::vector<std::vector<int>> incident(n);
  for (int e = 0; e < base.edge_count(); ++e) {
    auto [u, v] = base.edges()[e];
    incident[u].push_back(e);
    incident[v].push_back(e);
  }

  // outer vertex (v, e, bit); middle vertex (v, S) for even subsets S of
  // incident edges
  std::map<std::tuple<int, int, int>, int> outer_id;
  std::vector<std::vector<std::pair<unsigned, int>>> middles(n);  // (subset mask, id)
  int next = 0;
  for (int v = 0; v < n; ++v) {
    for (int e : incident[v])
      for (int bit = 0; bit < 2; ++bit) outer_id[{v, e, bit}] = next++;
    int d = static_cast<int>(incident[v].size());
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      if (__builtin_popcount(mask) % 2 != 0) continue;
      middles[v].push_back({mask, next++});
    }
  }

  auto build = [&](int twisted_edge) {
    Graph g(next);
    for (int v = 0; v < n; ++v) {
      int d = static_cast<int>(incident[v].size());
      for (auto [mask, mid] : middles[v])
        for (int i = 0; i < d; ++i) {
          int e = incident[v][i];
          int bit = (mask >> i) & 1;
          g.add_edge(mid, outer_id[{v, e, bit}]);
        }
    }
    for (int e = 0; e < base.edge_count(); ++e) {
      auto [u, v] = base.edges()[e];
      if (e == twisted_edge) {
        g.add_edge(outer_id[{u, e, 0}], outer_id[{v, e, 1}]);
        g.add_edge(outer_id[{u, e, 1}], outer_id[{v, e, 0}]);
      } else {
        g.add_edge(outer_id[{u, e, 0}], outer_id[{v, e, 0}]);
        g.add_edge(outer_id[{u, e, 1}], outer_id[{v, e, 1}]);
      }
    }
    return g;
  };

  return {build(-1), build(0)};
}

}  // namespace homdist
