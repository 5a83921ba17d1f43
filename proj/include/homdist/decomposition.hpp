#pragma once

#include "homdist/graph.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace homdist {

/// Tree decomposition: an acyclic connected host tree plus one bag per tree
/// node. Valid decompositions cover all vertices, cover every edge inside
/// some bag, and have connected occurrence subtrees.
struct TreeDecomposition {
  Graph tree;                          // host tree, nodes [0, bags.size())
  std::vector<std::vector<int>> bags;  // each sorted ascending

  int width() const {
    int w = -1;
    for (auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }
};

/// Empty string when valid, else the name of the violated condition.
inline std::string validate_decomposition(const Graph& g, const TreeDecomposition& td) {
  int n = g.vertex_count();
  int m = static_cast<int>(td.bags.size());
  if (td.tree.vertex_count() != m) return "host tree node count differs from bag count";
  if (m == 0) return n == 0 ? "" : "vertex cover (condition 1): no bags";
  if (td.tree.edge_count() != m - 1 || !is_connected(td.tree)) return "host graph is not a tree";
  for (auto& b : td.bags) {
    if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
      return "bag not sorted-unique";
    for (int v : b)
      if (v < 0 || v >= n) return "bag vertex out of range";
  }
  std::vector<char> covered(n, 0);
  for (auto& b : td.bags)
    for (int v : b) covered[v] = 1;
  for (int v = 0; v < n; ++v)
    if (!covered[v]) return "vertex cover (condition 1): vertex " + std::to_string(v) + " in no bag";
  for (auto [u, v] : g.edges()) {
    bool ok = false;
    for (auto& b : td.bags)
      if (std::binary_search(b.begin(), b.end(), u) && std::binary_search(b.begin(), b.end(), v)) {
        ok = true;
        break;
      }
    if (!ok) return "edge cover (condition 2): edge {" + std::to_string(u) + "," + std::to_string(v) + "} in no bag";
  }
  for (int v = 0; v < n; ++v) {
    std::vector<int> nodes;
    for (int x = 0; x < m; ++x)
      if (std::binary_search(td.bags[x].begin(), td.bags[x].end(), v)) nodes.push_back(x);
    // BFS within the occurrence set
    std::set<int> todo(nodes.begin(), nodes.end());
    std::vector<int> stack{nodes[0]};
    todo.erase(nodes[0]);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : td.tree.neighbors(x))
        if (todo.count(y)) {
          todo.erase(y);
          stack.push_back(y);
        }
    }
    if (!todo.empty()) return "connectivity (condition 3): occurrences of vertex " + std::to_string(v) + " not connected";
  }
  return "";
}

namespace detail {

/// Number of vertices outside S∪{v} reachable from v via paths internal to S.
inline int elimination_degree(const Graph& g, int v, unsigned S) {
  int n = g.vertex_count();
  unsigned seen = 1u << v;
  std::vector<int> stack{v};
  int count = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(x)) {
      if (seen & (1u << u)) continue;
      seen |= 1u << u;
      if (S & (1u << u)) {
        stack.push_back(u);
      } else {
        ++count;
      }
    }
  }
  (void)n;
  return count;
}

}  // namespace detail

/// Exact treewidth by elimination-ordering DP over vertex subsets.
/// Refusal threshold is a knob, not a hard constant.
inline int treewidth_value(const Graph& g_in, int size_limit = 13) {
  Graph g = g_in.has_any_loop() ? simple_reduct(g_in) : g_in;
  int n = g.vertex_count();
  if (n > size_limit)
    throw size_limit_error("treewidth: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  if (n == 0) return -1;
  std::vector<int> f(1u << n, 0);
  for (unsigned S = 1; S < (1u << n); ++S) {
    int best = n;
    for (int v = 0; v < n; ++v) {
      if (!(S & (1u << v))) continue;
      unsigned rest = S & ~(1u << v);
      best = std::min(best, std::max(f[rest], detail::elimination_degree(g, v, rest)));
    }
    f[S] = best;
  }
  return f[(1u << n) - 1];
}

namespace detail {

inline std::vector<int> optimal_elimination_order(const Graph& g) {
  int n = g.vertex_count();
  std::vector<int> f(1u << n, 0);
  for (unsigned S = 1; S < (1u << n); ++S) {
    int best = n;
    for (int v = 0; v < n; ++v) {
      if (!(S & (1u << v))) continue;
      unsigned rest = S & ~(1u << v);
      best = std::min(best, std::max(f[rest], elimination_degree(g, v, rest)));
    }
    f[S] = best;
  }
  // peeling from the full set finds the last-eliminated vertex first
  std::vector<int> order;
  unsigned S = (1u << n) - 1;
  while (S) {
    for (int v = 0; v < n; ++v) {
      if (!(S & (1u << v))) continue;
      unsigned rest = S & ~(1u << v);
      if (std::max(f[rest], elimination_degree(g, v, rest)) == f[S]) {
        order.push_back(v);
        S = rest;
        break;
      }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

/// Builds a decomposition from an elimination order by recursive fill-in.
inline TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order) {
  int n = g.vertex_count();
  TreeDecomposition td;
  if (n == 0) {
    td.tree = Graph(1);
    td.bags = {{}};
    return td;
  }
  // adjacency evolves as vertices are eliminated and neighborhoods cliqued
  std::vector<std::set<int>> adj(n);
  for (auto [u, v] : g.edges())
    if (u != v) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
  struct Pending {
    int v;
    std::vector<int> bag;  // {v} ∪ N(v) at elimination, sorted
  };
  std::vector<Pending> pend;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    int v = order[i];
    std::vector<int> nb(adj[v].begin(), adj[v].end());
    for (int a : nb) {
      adj[a].erase(v);
      for (int b : nb)
        if (a != b) adj[a].insert(b);
    }
    adj[v].clear();
    std::vector<int> bag = nb;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    pend.push_back({v, bag});
  }
  td.tree = Graph(1);
  td.bags = {{order.back()}};
  for (auto it = pend.rbegin(); it != pend.rend(); ++it) {
    // attach to a bag containing N(v); N(v) is a clique in the reduced graph
    std::vector<int> nv = it->bag;
    nv.erase(std::find(nv.begin(), nv.end(), it->v));
    int host = 0;
    for (int x = 0; x < static_cast<int>(td.bags.size()); ++x) {
      bool all = true;
      for (int u : nv)
        if (!std::binary_search(td.bags[x].begin(), td.bags[x].end(), u)) {
          all = false;
          break;
        }
      if (all) {
        host = x;
        break;
      }
    }
    int id = static_cast<int>(td.bags.size());
    td.bags.push_back(it->bag);
    Graph t(id + 1);
    for (auto [a, b] : td.tree.edges()) t.add_edge(a, b);
    t.add_edge(host, id);
    td.tree = t;
  }
  return td;
}

}  // namespace detail

/// Minimal-width tree decomposition; width equals treewidth_value.
inline std::pair<int, TreeDecomposition> treewidth_exact(const Graph& g_in, int size_limit = 13) {
  Graph g = g_in.has_any_loop() ? simple_reduct(g_in) : g_in;
  int n = g.vertex_count();
  if (n > size_limit)
    throw size_limit_error("treewidth: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  if (n == 0) {
    TreeDecomposition td;
    td.tree = Graph(1);
    td.bags = {{}};
    return {-1, td};
  }
  auto order = detail::optimal_elimination_order(g);
  auto td = detail::decomposition_from_order(g, order);
  auto complaint = validate_decomposition(g, td);
  if (!complaint.empty()) throw std::logic_error("treewidth_exact: built invalid decomposition: " + complaint);
  return {td.width(), td};
}

/// Exact pathwidth via vertex separation DP; returns a path decomposition
/// (host tree is a path with nodes 0-1-2-...).
inline std::pair<int, TreeDecomposition> pathwidth_exact(const Graph& g_in, int size_limit = 13) {
  Graph g = g_in.has_any_loop() ? simple_reduct(g_in) : g_in;
  int n = g.vertex_count();
  if (n > size_limit)
    throw size_limit_error("pathwidth: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  if (n == 0) {
    TreeDecomposition td;
    td.tree = Graph(1);
    td.bags = {{}};
    return {-1, td};
  }
  // boundary(S) = vertices of S with a neighbor outside S
  auto boundary_size = [&](unsigned S) {
    int c = 0;
    for (int v = 0; v < n; ++v) {
      if (!(S & (1u << v))) continue;
      for (int u : g.neighbors(v))
        if (!(S & (1u << u))) {
          ++c;
          break;
        }
    }
    return c;
  };
  std::vector<int> f(1u << n, 0);
  for (unsigned S = 1; S < (1u << n); ++S) {
    int bd = boundary_size(S);
    int best = n;
    for (int v = 0; v < n; ++v)
      if (S & (1u << v)) best = std::min(best, f[S & ~(1u << v)]);
    f[S] = std::max(bd, best);
  }
  std::vector<int> order;
  unsigned S = (1u << n) - 1;
  while (S) {
    for (int v = 0; v < n; ++v) {
      if (!(S & (1u << v))) continue;
      if (std::max(boundary_size(S), f[S & ~(1u << v)]) == f[S]) {
        order.push_back(v);
        S &= ~(1u << v);
        break;
      }
    }
  }
  std::reverse(order.begin(), order.end());
  TreeDecomposition td;
  td.tree = path_graph(n);
  unsigned prefix = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> bag;
    for (int v = 0; v < n; ++v) {
      if (!(prefix & (1u << v))) continue;
      for (int u : g.neighbors(v))
        if (!(prefix & (1u << u))) {
          bag.push_back(v);
          break;
        }
    }
    bag.push_back(order[i]);
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(bag);
    prefix |= 1u << order[i];
  }
  auto complaint = validate_decomposition(g, td);
  if (!complaint.empty()) throw std::logic_error("pathwidth_exact: built invalid decomposition: " + complaint);
  return {f[(1u << n) - 1], td};
}

enum class DecompositionShape { tree, path };

/// Decomposition in which every bag has exactly k+1 vertices and adjacent
/// bags share exactly k, obtained by the contraction / enlargement /
/// subdivision loop. Requires width(G) <= k and |V(G)| >= k+1.
inline TreeDecomposition smooth_decomposition(const Graph& g_in, int k, DecompositionShape shape, int size_limit = 13) {
  Graph g = g_in.has_any_loop() ? simple_reduct(g_in) : g_in;
  int n = g.vertex_count();
  if (n < k + 1)
    throw std::invalid_argument("smooth_decomposition: need |V| >= k+1, got |V|=" + std::to_string(n) + ", k=" + std::to_string(k));
  auto [w, td] = shape == DecompositionShape::tree ? treewidth_exact(g, size_limit) : pathwidth_exact(g, size_limit);
  if (w > k)
    throw std::invalid_argument(std::string("smooth_decomposition: ") + (shape == DecompositionShape::tree ? "treewidth " : "pathwidth ") + std::to_string(w) + " exceeds bound " + std::to_string(k));

  auto bag_subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  auto intersection_size = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return static_cast<int>(out.size());
  };

  long guard = 16L * (n + 2) * (n + 2) * (k + 2);
  for (;;) {
    if (--guard < 0) throw std::logic_error("smooth_decomposition: smoothing loop did not converge");
    int m = static_cast<int>(td.bags.size());
    bool changed = false;
    // 1. contract a tree edge with nested bags
    for (auto [s, t] : td.tree.edges()) {
      if (!(bag_subset(td.bags[s], td.bags[t]) || bag_subset(td.bags[t], td.bags[s]))) continue;
      std::vector<int> merged;
      std::set_union(td.bags[s].begin(), td.bags[s].end(), td.bags[t].begin(), td.bags[t].end(), std::back_inserter(merged));
      TreeDecomposition nd;
      nd.tree = Graph(m - 1);
      auto remap = [&](int x) { return x < t ? x : (x == t ? s : x - 1); };
      std::set<std::pair<int, int>> es;
      for (auto [a, b] : td.tree.edges()) {
        int na = remap(a), nb = remap(b);
        if (na == nb) continue;
        es.insert(std::minmax(na, nb));
      }
      for (auto [a, b] : es) nd.tree.add_edge(a, b);
      // node t removed (s < t since edges are stored sorted); s keeps the union
      for (int x = 0; x < m; ++x) {
        if (x == t) continue;
        nd.bags.push_back(x == s ? merged : td.bags[x]);
      }
      td = std::move(nd);
      changed = true;
      break;
    }
    if (changed) continue;
    // 2. enlarge a small bag from a neighbor
    for (auto [s0, t0] : td.tree.edges()) {
      for (auto [s, t] : {std::pair{s0, t0}, std::pair{t0, s0}}) {
        if (static_cast<int>(td.bags[s].size()) >= k + 1) continue;
        std::vector<int> diff;
        std::set_difference(td.bags[t].begin(), td.bags[t].end(), td.bags[s].begin(), td.bags[s].end(), std::back_inserter(diff));
        if (diff.empty()) continue;
        td.bags[s].push_back(diff.front());
        std::sort(td.bags[s].begin(), td.bags[s].end());
        changed = true;
        break;
      }
      if (changed) break;
    }
    if (changed) continue;
    // 3. subdivide a tree edge whose endpoint bags overlap too little
    for (auto [s, t] : td.tree.edges()) {
      if (static_cast<int>(td.bags[s].size()) != k + 1 || static_cast<int>(td.bags[t].size()) != k + 1) continue;
      if (intersection_size(td.bags[s], td.bags[t]) >= k) continue;
      std::vector<int> sv, tv;
      std::set_difference(td.bags[s].begin(), td.bags[s].end(), td.bags[t].begin(), td.bags[t].end(), std::back_inserter(sv));
      std::set_difference(td.bags[t].begin(), td.bags[t].end(), td.bags[s].begin(), td.bags[s].end(), std::back_inserter(tv));
      std::vector<int> fresh = td.bags[s];
      fresh.erase(std::find(fresh.begin(), fresh.end(), sv.front()));
      fresh.push_back(tv.front());
      std::sort(fresh.begin(), fresh.end());
      int id = m;
      Graph nt(m + 1);
      for (auto [a, b] : td.tree.edges())
        if (!(a == std::min(s, t) && b == std::max(s, t))) nt.add_edge(a, b);
      nt.add_edge(s, id);
      nt.add_edge(t, id);
      td.tree = std::move(nt);
      td.bags.push_back(fresh);
      changed = true;
      break;
    }
    if (!changed) break;
  }

  auto complaint = validate_decomposition(g, td);
  if (!complaint.empty()) throw std::logic_error("smooth_decomposition: invalid result: " + complaint);
  for (auto& b : td.bags)
    if (static_cast<int>(b.size()) != k + 1) throw std::logic_error("smooth_decomposition: bag of size != k+1 after smoothing");
  for (auto [s, t] : td.tree.edges())
    if (intersection_size(td.bags[s], td.bags[t]) != k) throw std::logic_error("smooth_decomposition: adjacent intersection != k after smoothing");
  if (shape == DecompositionShape::path) {
    for (int x = 0; x < td.tree.vertex_count(); ++x)
      if (td.tree.degree(x) > 2) throw std::logic_error("smooth_decomposition: host not a path");
  }
  return td;
}

}  // namespace homdist
