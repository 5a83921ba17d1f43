#pragma once

#include "homdist/numeric.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace homdist {

/// Simple undirected graph on vertex set [0, n). Loops are permitted only
/// when constructed with allow_loops; parallel edges never exist.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n, bool allow_loops = false) : n_(n), allow_loops_(allow_loops), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool allows_loops() const { return allow_loops_; }

  bool adjacent(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }

  bool has_loop(int v) const { return adjacent(v, v); }

  bool has_any_loop() const {
    for (int v = 0; v < n_; ++v)
      if (adj_[static_cast<std::size_t>(v) * n_ + v]) return true;
    return false;
  }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v && !allow_loops_) throw std::invalid_argument("Graph::add_edge: loop in simple graph");
    if (u > v) std::swap(u, v);
    if (adj_[static_cast<std::size_t>(u) * n_ + v]) throw std::invalid_argument("Graph::add_edge: duplicate edge");
    adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
    adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
    edges_.insert(edges_.begin() + static_cast<long>(edge_pos(u, v)), {u, v});
  }

  void add_edge_if_absent(int u, int v) {
    if (u > v) std::swap(u, v);
    if (u == v && !allow_loops_) return;
    if (!adj_[static_cast<std::size_t>(u) * n_ + v]) add_edge(u, v);
  }

  void remove_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u > v) std::swap(u, v);
    if (!adj_[static_cast<std::size_t>(u) * n_ + v]) throw std::invalid_argument("Graph::remove_edge: no such edge");
    adj_[static_cast<std::size_t>(u) * n_ + v] = 0;
    adj_[static_cast<std::size_t>(v) * n_ + u] = 0;
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
    edges_.erase(it);
  }

  /// Edges sorted lexicographically, each as (u, v) with u <= v.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  std::vector<int> neighbors(int v) const {
    check_vertex(v);
    std::vector<int> out;
    for (int u = 0; u < n_; ++u)
      if (u != v && adj_[static_cast<std::size_t>(v) * n_ + u]) out.push_back(u);
    return out;
  }

  /// Loop at v does not contribute to degree here.
  int degree(int v) const {
    check_vertex(v);
    int d = 0;
    for (int u = 0; u < n_; ++u)
      if (u != v && adj_[static_cast<std::size_t>(v) * n_ + u]) ++d;
    return d;
  }

  std::vector<int> degree_sequence() const {
    std::vector<int> ds(n_);
    for (int v = 0; v < n_; ++v) ds[v] = degree(v);
    std::sort(ds.begin(), ds.end());
    return ds;
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }
  bool operator!=(const Graph& o) const { return !(*this == o); }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("Graph: vertex " + std::to_string(v) + " out of range [0," + std::to_string(n_) + ")");
  }

  std::size_t edge_pos(int u, int v) const {
    return static_cast<std::size_t>(std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v)) - edges_.begin());
  }

  int n_ = 0;
  bool allow_loops_ = false;
  std::vector<char> adj_;
  std::vector<std::pair<int, int>> edges_;
};

// ---------------------------------------------------------------------------
// Standard constructions

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: need n >= 3");
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
  return g;
}

inline Graph empty_graph(int n) { return Graph(n); }

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g(a.vertex_count() + b.vertex_count(), a.allows_loops() || b.allows_loops());
  for (auto [u, v] : a.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.edges()) g.add_edge(a.vertex_count() + u, a.vertex_count() + v);
  return g;
}

/// Induced subgraph on the given vertices (ascending order defines the new ids).
inline Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  std::vector<int> vs = vertices;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<int> idx(g.vertex_count(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = static_cast<int>(i);
  Graph out(static_cast<int>(vs.size()), g.allows_loops());
  for (auto [u, v] : g.edges())
    if (idx[u] >= 0 && idx[v] >= 0) out.add_edge(idx[u], idx[v]);
  return out;
}

/// Complement of a simple graph; V unchanged, edge present iff absent.
inline Graph complement(const Graph& g) {
  if (g.has_any_loop()) throw std::invalid_argument("complement: graph must be simple");
  Graph out(g.vertex_count());
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = u + 1; v < g.vertex_count(); ++v)
      if (!g.adjacent(u, v)) out.add_edge(u, v);
  return out;
}

/// Drops loops, keeps everything else.
inline Graph simple_reduct(const Graph& g) {
  Graph out(g.vertex_count());
  for (auto [u, v] : g.edges())
    if (u != v) out.add_edge(u, v);
  return out;
}

inline std::vector<int> component_ids(const Graph& g) {
  int n = g.vertex_count();
  std::vector<int> comp(n, -1);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v))
        if (comp[u] < 0) {
          comp[u] = c;
          stack.push_back(u);
        }
    }
    ++c;
  }
  return comp;
}

inline int component_count(const Graph& g) {
  auto ids = component_ids(g);
  return ids.empty() ? 0 : 1 + *std::max_element(ids.begin(), ids.end());
}

inline bool is_connected(const Graph& g) { return g.vertex_count() <= 1 || component_count(g) == 1; }

inline Graph random_graph(int n, std::uint64_t num, std::uint64_t den, Rng& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(num, den)) g.add_edge(u, v);
  return g;
}

/// Relabels vertices: new vertex i is old vertex perm[i].
inline Graph relabel(const Graph& g, const std::vector<int>& perm) {
  int n = g.vertex_count();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("relabel: permutation size mismatch");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n || inv[perm[i]] != -1) throw std::invalid_argument("relabel: not a permutation");
    inv[perm[i]] = i;
  }
  Graph out(n, g.allows_loops());
  for (auto [u, v] : g.edges()) out.add_edge(inv[u], inv[v]);
  return out;
}

// ---------------------------------------------------------------------------
// Relation types (equality / adjacency pattern of a vertex tuple)

/// Equality and adjacency pattern of a k-tuple over all position pairs
/// i < j. Pairs are indexed in lexicographic order of (i, j).
struct RelType {
  int k = 0;
  std::vector<char> equal;     // size k*(k-1)/2
  std::vector<char> adjacent;  // size k*(k-1)/2

  bool operator==(const RelType& o) const { return k == o.k && equal == o.equal && adjacent == o.adjacent; }

  /// Compact byte encoding, identical iff the rel types are equal.
  std::string encode() const {
    std::string s;
    s.push_back(static_cast<char>(k));
    for (std::size_t i = 0; i < equal.size(); ++i) s.push_back(static_cast<char>(equal[i] | (adjacent[i] << 1)));
    return s;
  }
};

inline RelType rel_type(const Graph& g, const std::vector<int>& tuple) {
  if (tuple.empty()) throw std::invalid_argument("rel_type: tuple must be nonempty");
  RelType r;
  r.k = static_cast<int>(tuple.size());
  for (int i = 0; i < r.k; ++i)
    for (int j = i + 1; j < r.k; ++j) {
      r.equal.push_back(tuple[i] == tuple[j]);
      r.adjacent.push_back(g.adjacent(tuple[i], tuple[j]));
    }
  return r;
}

// ---------------------------------------------------------------------------
// Formats

enum class GraphFormat { graph6, edge_list };

/// Edge-list text: first line "n", then one "u v" per line, 0-indexed.
inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  Graph g;
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.pop_back();
    std::size_t start = trimmed.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    trimmed = trimmed.substr(start);
    std::istringstream ls(trimmed);
    if (n < 0) {
      if (!(ls >> n) || n < 0) throw parse_error("edge list line " + std::to_string(lineno) + ": malformed header");
      std::string rest;
      if (ls >> rest) throw parse_error("edge list line " + std::to_string(lineno) + ": trailing tokens after header");
      g = Graph(n);
      continue;
    }
    int u, v;
    if (!(ls >> u >> v)) throw parse_error("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    std::string rest;
    if (ls >> rest) throw parse_error("edge list line " + std::to_string(lineno) + ": trailing tokens");
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw parse_error("edge list line " + std::to_string(lineno) + ": vertex out of range [0," + std::to_string(n) + ")");
    if (u == v) throw parse_error("edge list line " + std::to_string(lineno) + ": loop not allowed");
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second)
      throw parse_error("edge list line " + std::to_string(lineno) + ": duplicate edge");
    g.add_edge(u, v);
  }
  if (n < 0) throw parse_error("edge list: missing header line");
  return g;
}

inline std::string to_edge_list(const Graph& g) {
  if (g.has_any_loop()) throw std::invalid_argument("to_edge_list: loops not representable");
  std::ostringstream out;
  out << g.vertex_count() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

/// graph6 per the published byte layout (simple graphs, n <= 258047 here).
inline Graph parse_graph6(const std::string& text) {
  std::string s = text;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  const std::string header = ">>graph6<<";
  if (s.rfind(header, 0) == 0) s = s.substr(header.size());
  if (s.empty()) throw parse_error("graph6: empty input");
  std::size_t pos = 0;
  auto byte = [&](std::size_t i) -> int {
    if (i >= s.size()) throw parse_error("graph6: truncated at offset " + std::to_string(i));
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 63 || c > 126) throw parse_error("graph6: invalid byte at offset " + std::to_string(i));
    return c - 63;
  };
  long long n;
  if (byte(0) < 63) {
    n = byte(0);
    pos = 1;
  } else {
    if (s.size() >= 2 && static_cast<unsigned char>(s[1]) == 126)
      throw parse_error("graph6: vertex counts beyond 258047 unsupported");
    n = (static_cast<long long>(byte(1)) << 12) | (byte(2) << 6) | byte(3);
    pos = 4;
  }
  long long bits = n * (n - 1) / 2;
  std::size_t nbytes = static_cast<std::size_t>((bits + 5) / 6);
  if (s.size() != pos + nbytes)
    throw parse_error("graph6: expected " + std::to_string(pos + nbytes) + " bytes, got " + std::to_string(s.size()));
  Graph g(static_cast<int>(n));
  long long bit = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++bit) {
      int b = byte(pos + static_cast<std::size_t>(bit / 6));
      if ((b >> (5 - bit % 6)) & 1) g.add_edge(i, j);
    }
  return g;
}

inline std::string to_graph6(const Graph& g) {
  if (g.has_any_loop()) throw std::invalid_argument("to_graph6: loops not representable");
  int n = g.vertex_count();
  std::string s;
  if (n <= 62) {
    s.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    s.push_back(126);
    s.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    s.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    s.push_back(static_cast<char>((n & 63) + 63));
  } else {
    throw std::invalid_argument("to_graph6: vertex count too large");
  }
  int acc = 0, fill = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++fill == 6) {
        s.push_back(static_cast<char>(acc + 63));
        acc = 0;
        fill = 0;
      }
    }
  if (fill > 0) s.push_back(static_cast<char>((acc << (6 - fill)) + 63));
  return s;
}

inline Graph parse_graph(const std::string& text, GraphFormat format) {
  return format == GraphFormat::graph6 ? parse_graph6(text) : parse_edge_list(text);
}

inline std::string serialize_graph(const Graph& g, GraphFormat format) {
  return format == GraphFormat::graph6 ? to_graph6(g) : to_edge_list(g);
}

/// First non-space byte a digit => edge list, otherwise graph6.
inline GraphFormat sniff_format(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return (c >= '0' && c <= '9') ? GraphFormat::edge_list : GraphFormat::graph6;
  }
  throw parse_error("cannot sniff format of empty input");
}

}  // namespace homdist
