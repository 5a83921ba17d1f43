#pragma once

#include "homdist/graph.hpp"
#include "homdist/isomorphism.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace homdist {

/// A (t,t)-bilabelled graph: an underlying graph (loops allowed) with an
/// in-label tuple and an out-label tuple of length t. Label entries may
/// repeat within and across tuples.
struct BilabelledGraph {
  int t = 0;
  Graph graph;                 // loops allowed
  std::vector<int> in_labels;  // size t
  std::vector<int> out_labels; // size t

  /// Label at 1-based position p in [1, 2t]: in-labels first, then out.
  int label_at(int p) const {
    if (p < 1 || p > 2 * t) throw std::invalid_argument("label position out of range");
    return p <= t ? in_labels[p - 1] : out_labels[p - t - 1];
  }

  void validate() const {
    if (t < 1) throw std::invalid_argument("BilabelledGraph: t must be >= 1");
    if (static_cast<int>(in_labels.size()) != t || static_cast<int>(out_labels.size()) != t)
      throw std::invalid_argument("BilabelledGraph: label tuple size mismatch");
    for (int v : in_labels)
      if (v < 0 || v >= graph.vertex_count()) throw std::invalid_argument("BilabelledGraph: in-label out of range");
    for (int v : out_labels)
      if (v < 0 || v >= graph.vertex_count()) throw std::invalid_argument("BilabelledGraph: out-label out of range");
  }

  bool all_vertices_labelled() const {
    std::vector<char> hit(graph.vertex_count(), 0);
    for (int v : in_labels) hit[v] = 1;
    for (int v : out_labels) hit[v] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Quotient a loopy graph by an identification; multi-edges collapse, loops
/// (pre-existing or arising) are kept. Representatives are renumbered in
/// ascending order of their smallest member.
struct Quotient {
  Graph graph;
  std::vector<int> map;  // old vertex -> new vertex
};

inline Quotient quotient(const Graph& g, UnionFind& uf) {
  int n = g.vertex_count();
  std::vector<int> reps;
  std::vector<int> map(n, -1);
  for (int v = 0; v < n; ++v)
    if (uf.find(v) == v) {
      map[v] = static_cast<int>(reps.size());
      reps.push_back(v);
    }
  for (int v = 0; v < n; ++v) map[v] = map[uf.find(v)];
  Graph out(static_cast<int>(reps.size()), true);
  for (auto [u, v] : g.edges()) out.add_edge_if_absent(map[u], map[v]);
  return {std::move(out), std::move(map)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Atomic generators

/// J: 2t isolated labelled vertices.
inline BilabelledGraph atomic_j(int t) {
  if (t < 1) throw std::invalid_argument("atomic_j: t must be >= 1");
  BilabelledGraph f;
  f.t = t;
  f.graph = Graph(2 * t, true);
  for (int i = 0; i < t; ++i) f.in_labels.push_back(i);
  for (int i = 0; i < t; ++i) f.out_labels.push_back(t + i);
  return f;
}

/// A^{ij}: J plus the edge between label positions i and j (1-based, i < j).
inline BilabelledGraph atomic_a(int t, int i, int j) {
  if (!(1 <= i && i < j && j <= 2 * t)) throw std::invalid_argument("atomic_a: need 1 <= i < j <= 2t");
  BilabelledGraph f = atomic_j(t);
  f.graph.add_edge(i - 1, j - 1);
  return f;
}

/// I^{ij}: A^{ij} with the edge contracted, so positions i and j share a
/// vertex and there is no edge.
inline BilabelledGraph atomic_i(int t, int i, int j) {
  if (!(1 <= i && i < j && j <= 2 * t)) throw std::invalid_argument("atomic_i: need 1 <= i < j <= 2t");
  BilabelledGraph f;
  f.t = t;
  f.graph = Graph(2 * t - 1, true);
  // positions renumbered with j collapsed onto i
  auto vertex_of = [&](int p) {  // 1-based position
    if (p == j) return i - 1;
    return p < j ? p - 1 : p - 2;
  };
  for (int p = 1; p <= t; ++p) f.in_labels.push_back(vertex_of(p));
  for (int p = t + 1; p <= 2 * t; ++p) f.out_labels.push_back(vertex_of(p));
  return f;
}

/// The series identity I^{1,t+1} ⊙ ... ⊙ I^{t,2t}: in and out position q on a
/// shared vertex for each q.
inline BilabelledGraph identity_chain(int t) {
  BilabelledGraph f;
  f.t = t;
  f.graph = Graph(t, true);
  for (int i = 0; i < t; ++i) f.in_labels.push_back(i);
  f.out_labels = f.in_labels;
  return f;
}

// ---------------------------------------------------------------------------
// Composition and label actions

struct ComposeMaps {
  std::vector<int> map_a, map_b;  // old vertex -> composed vertex
};

/// Series composition: identify a.out[i] with b.in[i]; in-labels from a,
/// out-labels from b. Multi-edges are dropped, arising loops kept.
inline BilabelledGraph series(const BilabelledGraph& a, const BilabelledGraph& b, ComposeMaps* maps = nullptr) {
  if (a.t != b.t) throw std::invalid_argument("series: arity mismatch");
  int na = a.graph.vertex_count();
  Graph uni = disjoint_union(a.graph, b.graph);
  Graph uni_loopy(uni.vertex_count(), true);
  for (auto [u, v] : uni.edges()) uni_loopy.add_edge(u, v);
  detail::UnionFind uf(uni.vertex_count());
  for (int i = 0; i < a.t; ++i) uf.unite(a.out_labels[i], na + b.in_labels[i]);
  auto q = detail::quotient(uni_loopy, uf);
  BilabelledGraph out;
  out.t = a.t;
  out.graph = std::move(q.graph);
  for (int i = 0; i < a.t; ++i) out.in_labels.push_back(q.map[a.in_labels[i]]);
  for (int i = 0; i < a.t; ++i) out.out_labels.push_back(q.map[na + b.out_labels[i]]);
  if (maps) {
    maps->map_a.assign(q.map.begin(), q.map.begin() + na);
    maps->map_b.assign(q.map.begin() + na, q.map.end());
  }
  return out;
}

/// Parallel composition: identify in-labels positionwise and out-labels
/// positionwise; labels inherited from a's positions.
inline BilabelledGraph parallel(const BilabelledGraph& a, const BilabelledGraph& b, ComposeMaps* maps = nullptr) {
  if (a.t != b.t) throw std::invalid_argument("parallel: arity mismatch");
  int na = a.graph.vertex_count();
  Graph uni = disjoint_union(a.graph, b.graph);
  Graph uni_loopy(uni.vertex_count(), true);
  for (auto [u, v] : uni.edges()) uni_loopy.add_edge(u, v);
  detail::UnionFind uf(uni.vertex_count());
  for (int i = 0; i < a.t; ++i) {
    uf.unite(a.in_labels[i], na + b.in_labels[i]);
    uf.unite(a.out_labels[i], na + b.out_labels[i]);
  }
  auto q = detail::quotient(uni_loopy, uf);
  BilabelledGraph out;
  out.t = a.t;
  out.graph = std::move(q.graph);
  for (int i = 0; i < a.t; ++i) out.in_labels.push_back(q.map[a.in_labels[i]]);
  for (int i = 0; i < a.t; ++i) out.out_labels.push_back(q.map[a.out_labels[i]]);
  if (maps) {
    maps->map_a.assign(q.map.begin(), q.map.begin() + na);
    maps->map_b.assign(q.map.begin() + na, q.map.end());
  }
  return out;
}

/// Label action: position p of the result carries the vertex at position
/// sigma[p] of f (both 1-based over [2t] via label_at; sigma is given
/// 0-based as a permutation vector of length 2t).
inline BilabelledGraph permute_labels(const BilabelledGraph& f, const std::vector<int>& sigma) {
  int k = 2 * f.t;
  if (static_cast<int>(sigma.size()) != k) throw std::invalid_argument("permute_labels: permutation size mismatch");
  std::vector<char> hit(k, 0);
  for (int x : sigma) {
    if (x < 0 || x >= k || hit[x]) throw std::invalid_argument("permute_labels: not a permutation of [2t]");
    hit[x] = 1;
  }
  BilabelledGraph out;
  out.t = f.t;
  out.graph = f.graph;
  for (int p = 0; p < f.t; ++p) out.in_labels.push_back(f.label_at(sigma[p] + 1));
  for (int p = f.t; p < k; ++p) out.out_labels.push_back(f.label_at(sigma[p] + 1));
  return out;
}

/// Swap in- and out-labels (the sigma exchanging i and t+i).
inline BilabelledGraph transpose(const BilabelledGraph& f) {
  BilabelledGraph out = f;
  std::swap(out.in_labels, out.out_labels);
  return out;
}

/// Drop the labels.
inline Graph unlabel(const BilabelledGraph& f) { return f.graph; }

/// Identify in-label i with out-label i for each i, then drop labels.
/// Loops arising from identification are kept.
inline Graph trace_graph(const BilabelledGraph& f) {
  detail::UnionFind uf(f.graph.vertex_count());
  for (int i = 0; i < f.t; ++i) uf.unite(f.in_labels[i], f.out_labels[i]);
  auto q = detail::quotient(f.graph, uf);
  return q.graph;
}

// ---------------------------------------------------------------------------
// Bilabelled minor operations

inline BilabelledGraph contract_edge(const BilabelledGraph& f, int u, int v) {
  if (!f.graph.adjacent(u, v)) throw std::invalid_argument("contract_edge: no such edge");
  if (u == v) {
    // contracting a loop just removes it
    BilabelledGraph out = f;
    out.graph.remove_edge(u, u);
    return out;
  }
  Graph without = f.graph;
  without.remove_edge(u, v);
  detail::UnionFind uf(f.graph.vertex_count());
  uf.unite(u, v);
  auto q = detail::quotient(without, uf);
  BilabelledGraph out;
  out.t = f.t;
  out.graph = std::move(q.graph);
  for (int x : f.in_labels) out.in_labels.push_back(q.map[x]);
  for (int x : f.out_labels) out.out_labels.push_back(q.map[x]);
  return out;
}

inline BilabelledGraph delete_edge(const BilabelledGraph& f, int u, int v) {
  BilabelledGraph out = f;
  out.graph.remove_edge(u, v);
  return out;
}

inline BilabelledGraph delete_unlabelled_vertex(const BilabelledGraph& f, int v) {
  for (int x : f.in_labels)
    if (x == v) throw std::invalid_argument("delete_unlabelled_vertex: vertex carries an in-label");
  for (int x : f.out_labels)
    if (x == v) throw std::invalid_argument("delete_unlabelled_vertex: vertex carries an out-label");
  std::vector<int> keep;
  for (int x = 0; x < f.graph.vertex_count(); ++x)
    if (x != v) keep.push_back(x);
  BilabelledGraph out;
  out.t = f.t;
  out.graph = induced_subgraph(f.graph, keep);
  auto remap = [&](int x) { return x < v ? x : x - 1; };
  for (int x : f.in_labels) out.in_labels.push_back(remap(x));
  for (int x : f.out_labels) out.out_labels.push_back(remap(x));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical keys and serialization

/// Key equal iff there is a label-respecting isomorphism (same t, bijection
/// preserving edges and both tuples positionally). Labeled positions act as
/// distinguishing colors; computed by refinement with backtracking.
inline std::string canonical_key(const BilabelledGraph& f, int size_limit = 16) {
  if (f.graph.vertex_count() > size_limit)
    throw size_limit_error("canonical_key: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  int n = f.graph.vertex_count();
  std::vector<std::uint64_t> colors(n, 0);
  for (int p = 1; p <= 2 * f.t; ++p) colors[f.label_at(p)] |= 1ull << (p - 1);
  auto res = canonical_form(f.graph, colors);
  std::string key;
  key.push_back(static_cast<char>(f.t));
  key += res.key;
  return key;
}

inline bool label_isomorphic(const BilabelledGraph& a, const BilabelledGraph& b) {
  if (a.t != b.t) return false;
  return canonical_key(a) == canonical_key(b);
}

/// One-line text form "t; n; u-v,...; i,...; o,..." bijective with the type.
inline std::string serialize_bilabelled(const BilabelledGraph& f) {
  std::ostringstream out;
  out << f.t << "; " << f.graph.vertex_count() << "; ";
  bool first = true;
  for (auto [u, v] : f.graph.edges()) {
    if (!first) out << ",";
    out << u << "-" << v;
    first = false;
  }
  if (first) out << "-";
  out << "; ";
  for (int i = 0; i < f.t; ++i) out << (i ? "," : "") << f.in_labels[i];
  out << "; ";
  for (int i = 0; i < f.t; ++i) out << (i ? "," : "") << f.out_labels[i];
  return out.str();
}

inline BilabelledGraph parse_bilabelled(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == ';') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 5) throw parse_error("bilabelled: expected 5 ';'-separated fields");
  auto strip = [](std::string s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    return s;
  };
  auto ints = [&](const std::string& s) {
    std::vector<int> out;
    std::string tok;
    for (char c : s + ",") {
      if (c == ',') {
        if (!tok.empty()) out.push_back(std::stoi(tok));
        tok.clear();
      } else {
        tok.push_back(c);
      }
    }
    return out;
  };
  BilabelledGraph f;
  f.t = std::stoi(strip(parts[0]));
  int n = std::stoi(strip(parts[1]));
  f.graph = Graph(n, true);
  std::string es = strip(parts[2]);
  if (es != "-") {
    std::string tok;
    for (char c : es + ",") {
      if (c == ',') {
        auto dash = tok.find('-');
        if (dash == std::string::npos) throw parse_error("bilabelled: malformed edge '" + tok + "'");
        f.graph.add_edge(std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1)));
        tok.clear();
      } else {
        tok.push_back(c);
      }
    }
  }
  f.in_labels = ints(strip(parts[3]));
  f.out_labels = ints(strip(parts[4]));
  f.validate();
  return f;
}

// ---------------------------------------------------------------------------
// Atomic enumeration

namespace detail {

/// Permutations of [k] in lexicographic one-line order.
inline std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// All partitions of [k] as restricted-growth strings.
inline std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(k, 0);
  auto rec = [&](auto&& self, int i, int maxc) -> void {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int c = 0; c <= maxc + 1; ++c) {
      rgs[i] = c;
      self(self, i + 1, std::max(maxc, c));
    }
  };
  if (k == 0)
    out.push_back({});
  else
    rec(rec, 0, -1);
  return out;
}

}  // namespace detail

/// All atomic (t,t)-bilabelled graphs up to label-respecting isomorphism:
/// a partition of the 2t label positions plus any edge set on the quotient.
/// Loops can only sit on classes holding >= 2 positions (they arise from
/// A^{ij} composed under an I^{ij} identification) and are omitted unless
/// with_loops.
inline std::vector<BilabelledGraph> enumerate_atomic(int t, bool with_loops) {
  if (t < 1) throw std::invalid_argument("enumerate_atomic: t must be >= 1");
  int k = 2 * t;
  std::vector<BilabelledGraph> out;
  for (auto& rgs : detail::set_partitions(k)) {
    int classes = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<int> class_size(classes, 0);
    for (int c : rgs) ++class_size[c];
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < classes; ++a)
      for (int b = a; b < classes; ++b) {
        if (a == b && (!with_loops || class_size[a] < 2)) continue;
        slots.push_back({a, b});
      }
    for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
      BilabelledGraph f;
      f.t = t;
      f.graph = Graph(classes, true);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask & (1u << s)) f.graph.add_edge(slots[s].first, slots[s].second);
      for (int p = 0; p < t; ++p) f.in_labels.push_back(rgs[p]);
      for (int p = t; p < k; ++p) f.out_labels.push_back(rgs[p]);
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace homdist
