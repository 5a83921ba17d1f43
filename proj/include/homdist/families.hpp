#pragma once

#include "homdist/bilabelled.hpp"
#include "homdist/decomposition.hpp"
#include "homdist/graph.hpp"
#include "homdist/isomorphism.hpp"
#include "homdist/outerplanar.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace homdist {

enum class Family { L, LPlus };

inline std::string family_name(Family f) { return f == Family::L ? "L" : "Lplus"; }

// ---------------------------------------------------------------------------
// Derivations

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

/// Expression tree over atomic leaves, series, parallel, and the label
/// action; replaying it reproduces the member's bilabelled graph.
struct Derivation {
  enum class Kind { atomic, series, parallel, sigma };
  Kind kind;
  BilabelledGraph atom;     // kind == atomic
  std::vector<int> sigma;   // kind == sigma, 0-based over [2t]
  DerivationPtr a, b;       // children (sigma uses a only)
};

inline DerivationPtr der_atomic(BilabelledGraph f) {
  if (!f.all_vertices_labelled()) throw std::invalid_argument("der_atomic: graph is not atomic");
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Kind::atomic;
  d->atom = std::move(f);
  return d;
}

inline DerivationPtr der_series(DerivationPtr a, DerivationPtr b) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Kind::series;
  d->a = std::move(a);
  d->b = std::move(b);
  return d;
}

inline DerivationPtr der_parallel(DerivationPtr a, DerivationPtr b) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Kind::parallel;
  d->a = std::move(a);
  d->b = std::move(b);
  return d;
}

inline DerivationPtr der_sigma(std::vector<int> sigma, DerivationPtr a) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Kind::sigma;
  d->sigma = std::move(sigma);
  d->a = std::move(a);
  return d;
}

inline BilabelledGraph replay(const DerivationPtr& d) {
  switch (d->kind) {
    case Derivation::Kind::atomic:
      return d->atom;
    case Derivation::Kind::series:
      return series(replay(d->a), replay(d->b));
    case Derivation::Kind::parallel:
      return parallel(replay(d->a), replay(d->b));
    case Derivation::Kind::sigma:
      return permute_labels(replay(d->a), d->sigma);
  }
  throw std::logic_error("replay: bad derivation node");
}

/// L_t requires every parallel node to compose with an atomic graph; L_t^+
/// has no restriction. Atomicity is semantic: the child's value must have
/// all vertices labelled.
inline bool derivation_in_family(const DerivationPtr& d, Family family) {
  switch (d->kind) {
    case Derivation::Kind::atomic:
      return true;
    case Derivation::Kind::series:
      return derivation_in_family(d->a, family) && derivation_in_family(d->b, family);
    case Derivation::Kind::parallel: {
      if (!derivation_in_family(d->a, family) || !derivation_in_family(d->b, family)) return false;
      if (family == Family::LPlus) return true;
      return replay(d->a).all_vertices_labelled() || replay(d->b).all_vertices_labelled();
    }
    case Derivation::Kind::sigma:
      return derivation_in_family(d->a, family);
  }
  return false;
}

inline std::string derivation_sexpr(const DerivationPtr& d) {
  switch (d->kind) {
    case Derivation::Kind::atomic:
      return "(atomic \"" + serialize_bilabelled(d->atom) + "\")";
    case Derivation::Kind::series:
      return "(series " + derivation_sexpr(d->a) + " " + derivation_sexpr(d->b) + ")";
    case Derivation::Kind::parallel:
      return "(parallel " + derivation_sexpr(d->a) + " " + derivation_sexpr(d->b) + ")";
    case Derivation::Kind::sigma: {
      std::string s = "(sigma (";
      for (std::size_t i = 0; i < d->sigma.size(); ++i) s += (i ? " " : "") + std::to_string(d->sigma[i] + 1);
      return s + ") " + derivation_sexpr(d->a) + ")";
    }
  }
  throw std::logic_error("derivation_sexpr: bad node");
}

namespace detail {

struct SexprParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  void expect(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) throw parse_error("derivation sexpr: expected '" + std::string(1, c) + "' at " + std::to_string(pos));
    ++pos;
  }
  std::string word() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    return s.substr(start, pos - start);
  }

  DerivationPtr parse() {
    expect('(');
    std::string head = word();
    if (head == "atomic") {
      skip();
      expect('"');
      std::size_t end = s.find('"', pos);
      if (end == std::string::npos) throw parse_error("derivation sexpr: unterminated string");
      auto atom = parse_bilabelled(s.substr(pos, end - pos));
      pos = end + 1;
      expect(')');
      return der_atomic(std::move(atom));
    }
    if (head == "series" || head == "parallel") {
      auto a = parse();
      auto b = parse();
      expect(')');
      return head == "series" ? der_series(a, b) : der_parallel(a, b);
    }
    if (head == "sigma") {
      expect('(');
      std::vector<int> sigma;
      for (;;) {
        skip();
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw parse_error("derivation sexpr: malformed permutation");
        sigma.push_back(std::stoi(s.substr(start, pos - start)) - 1);
      }
      auto a = parse();
      expect(')');
      return der_sigma(std::move(sigma), a);
    }
    throw parse_error("derivation sexpr: unknown head '" + head + "'");
  }
};

}  // namespace detail

inline DerivationPtr parse_derivation(const std::string& text) {
  detail::SexprParser p{text};
  auto d = p.parse();
  return d;
}

// ---------------------------------------------------------------------------
// Family members and enumeration

struct FamilyMember {
  BilabelledGraph graph;
  DerivationPtr derivation;
  Family family = Family::LPlus;
};

struct EnumerationBudget {
  int max_vertices = 6;  // on the underlying graph
  int max_depth = 4;     // series/parallel nesting; sigma is free
  bool with_loops = false;
};

/// Budget-bounded fixpoint closure of the atomic graphs under the family's
/// operations, deduplicated by canonical key. Complete for the budget: every
/// member with a derivation whose intermediate values stay within the vertex
/// budget (and depth budget) appears. Compositions of loopy graphs stay
/// loopy, so excluding loops loses no loop-free member.
inline std::vector<FamilyMember> enumerate_family(int t, Family family, const EnumerationBudget& budget) {
  struct Entry {
    FamilyMember member;
    int depth = 0;
    bool atomic_value = false;
  };
  std::map<std::string, Entry> known;
  std::vector<std::string> frontier;

  auto consider = [&](BilabelledGraph graph, DerivationPtr der, int depth) {
    if (graph.graph.vertex_count() > budget.max_vertices) return;
    if (!budget.with_loops && graph.graph.has_any_loop()) return;
    // `known` is orbit-closed, so a known key means the whole orbit is known
    if (known.count(canonical_key(graph))) return;
    // close under the label action at every node
    for (auto& sigma : detail::all_permutations(2 * t)) {
      bool identity = true;
      for (int i = 0; i < 2 * t; ++i)
        if (sigma[i] != i) identity = false;
      BilabelledGraph img = identity ? graph : permute_labels(graph, sigma);
      auto key = canonical_key(img);
      if (known.count(key)) continue;
      Entry e;
      e.member.graph = img;
      e.member.derivation = identity ? der : der_sigma(sigma, der);
      e.member.family = family;
      e.depth = depth;
      e.atomic_value = img.all_vertices_labelled();
      known.emplace(key, std::move(e));
      frontier.push_back(key);
    }
  };

  for (auto& a : enumerate_atomic(t, budget.with_loops)) consider(a, der_atomic(a), 0);

  std::vector<std::string> batch = frontier;
  frontier.clear();
  while (!batch.empty()) {
    for (const auto& key : batch) {
      Entry x = known.at(key);  // copy: `known` grows during the loop
      for (auto& [okey, y] : known) {
        int depth = 1 + std::max(x.depth, y.depth);
        if (depth > budget.max_depth) continue;
        int vx = x.member.graph.graph.vertex_count();
        int vy = y.member.graph.graph.vertex_count();
        if (vx + vy - t <= budget.max_vertices) {
          consider(series(x.member.graph, y.member.graph), der_series(x.member.derivation, y.member.derivation), depth);
          consider(series(y.member.graph, x.member.graph), der_series(y.member.derivation, x.member.derivation), depth);
        }
        bool parallel_ok = family == Family::LPlus || x.atomic_value || y.atomic_value;
        if (parallel_ok && vx + vy - 2 * t <= budget.max_vertices) {
          consider(parallel(x.member.graph, y.member.graph), der_parallel(x.member.derivation, y.member.derivation), depth);
        }
      }
    }
    batch = frontier;
    frontier.clear();
  }

  std::vector<FamilyMember> out;
  for (auto& [key, e] : known) out.push_back(e.member);
  return out;
}

// ---------------------------------------------------------------------------
// Named constructions

namespace detail {

inline Graph loopy_copy(const Graph& g) {
  Graph out(g.vertex_count(), true);
  for (auto [u, v] : g.edges()) out.add_edge(u, v);
  return out;
}

/// K_j = parallel composition of I^{i,t+i} over i != j (1-based j in [1,t]):
/// in/out position q share a vertex except at j, where both are isolated.
inline BilabelledGraph k_gadget(int t, int j) {
  if (j < 1 || j > t) throw std::invalid_argument("k_gadget: j out of range");
  BilabelledGraph f;
  f.t = t;
  f.graph = Graph(t + 1, true);
  for (int i = 0; i < t; ++i) f.in_labels.push_back(i);
  for (int i = 0; i < t; ++i) f.out_labels.push_back(i + 1 == j ? t : i);
  return f;
}

}  // namespace detail

/// The atomic E whose underlying graph is K_{2t} (all A^{ij} composed).
inline BilabelledGraph clique_atomic(int t) {
  BilabelledGraph f;
  f.t = t;
  f.graph = detail::loopy_copy(complete_graph(2 * t));
  for (int i = 0; i < t; ++i) f.in_labels.push_back(i);
  for (int i = 0; i < t; ++i) f.out_labels.push_back(t + i);
  return f;
}

/// E ⊙ (E · E): an L_t member whose underlying graph is K_{3t}.
inline FamilyMember clique_witness(int t) {
  if (t < 1 || t > 3) throw std::invalid_argument("clique_witness: t in [1,3] supported");
  BilabelledGraph e = clique_atomic(t);
  FamilyMember m;
  m.family = Family::L;
  m.derivation = der_parallel(der_atomic(e), der_series(der_atomic(e), der_atomic(e)));
  m.graph = replay(m.derivation);
  return m;
}

namespace detail {

/// Atomic member realizing a graph with at most `positions` vertices by
/// mapping label positions onto vertices surjectively.
inline FamilyMember small_graph_atomic(const Graph& f, int t, bool both_tuples_equal, Family family) {
  int n = f.vertex_count();
  BilabelledGraph g;
  g.t = t;
  g.graph = loopy_copy(f);
  if (both_tuples_equal) {
    for (int i = 0; i < t; ++i) g.in_labels.push_back(std::min(i, n - 1));
    g.out_labels = g.in_labels;
  } else {
    for (int i = 0; i < t; ++i) g.in_labels.push_back(std::min(i, n - 1));
    for (int i = 0; i < t; ++i) g.out_labels.push_back(std::min(t + i, n - 1));
  }
  FamilyMember m;
  m.family = family;
  m.derivation = der_atomic(g);
  m.graph = g;
  return m;
}

struct DecompositionWalk {
  const Graph& f;
  const TreeDecomposition& td;
  int t;

  std::vector<int> children_of(int node, int parent) const {
    std::vector<int> out;
    for (int y : td.tree.neighbors(node))
      if (y != parent) out.push_back(y);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The unique position q with want[q] not in the child's bag, and the
  /// child's unique private vertex.
  std::pair<int, int> pivot(const std::vector<int>& want, int node, int child) const {
    const auto& cb = td.bags[child];
    int j = -1;
    for (std::size_t q = 0; q < want.size(); ++q)
      if (!std::binary_search(cb.begin(), cb.end(), want[q])) {
        if (j >= 0) throw std::logic_error("decomposition walk: bags differ at more than one index");
        j = static_cast<int>(q);
      }
    if (j < 0) throw std::logic_error("decomposition walk: bags do not differ");
    std::vector<int> priv;
    std::set_difference(cb.begin(), cb.end(), td.bags[node].begin(), td.bags[node].end(), std::back_inserter(priv));
    if (priv.size() != 1) throw std::logic_error("decomposition walk: child does not introduce exactly one vertex");
    return {j, priv[0]};
  }
};

/// Induction over a smooth width-(2t-1) decomposition; bags have 2t vertices
/// carried as the full label tuple. Children re-rooted through the
/// label-moving gadget; bag edges contributed as atomic factors.
struct Width2tBuilder : DecompositionWalk {
  struct Piece {
    BilabelledGraph graph;
    DerivationPtr der;
  };

  Piece build(int node, int parent, const std::vector<int>& want) const {
    auto children = children_of(node, parent);
    if (children.empty()) {
      BilabelledGraph g;
      g.t = t;
      g.graph = Graph(2 * t, true);
      for (int a = 0; a < 2 * t; ++a)
        for (int b = a + 1; b < 2 * t; ++b)
          if (f.adjacent(want[a], want[b])) g.graph.add_edge(a, b);
      for (int i = 0; i < t; ++i) g.in_labels.push_back(i);
      for (int i = 0; i < t; ++i) g.out_labels.push_back(t + i);
      return {g, der_atomic(g)};
    }
    Piece combined;
    bool first = true;
    for (int c : children) {
      auto [j, w] = pivot(want, node, c);
      auto child_want = want;
      child_want[j] = w;
      Piece sub = build(c, node, child_want);
      Piece moved;
      if (j < t) {
        auto k = k_gadget(t, j + 1);
        moved.graph = series(k, sub.graph);
        moved.der = der_series(der_atomic(k), sub.der);
      } else {
        auto k = k_gadget(t, j - t + 1);
        moved.graph = series(sub.graph, k);
        moved.der = der_series(sub.der, der_atomic(k));
      }
      if (first) {
        combined = std::move(moved);
        first = false;
      } else {
        combined = {parallel(combined.graph, moved.graph), der_parallel(combined.der, moved.der)};
      }
    }
    for (int a = 0; a < 2 * t; ++a)
      for (int b = a + 1; b < 2 * t; ++b)
        if (f.adjacent(want[a], want[b])) {
          auto atom = atomic_a(t, a + 1, b + 1);
          combined = {parallel(combined.graph, atom), der_parallel(combined.der, der_atomic(atom))};
        }
    return combined;
  }
};

/// Induction over a smooth width-(t-1) decomposition with both label tuples
/// on the root bag; children chained in series between identity factors.
struct WidthTBuilder : DecompositionWalk {
  struct Piece {
    BilabelledGraph graph;
    DerivationPtr der;
  };

  Piece build(int node, int parent, const std::vector<int>& want) const {
    auto children = children_of(node, parent);
    if (children.empty()) {
      BilabelledGraph g;
      g.t = t;
      g.graph = Graph(t, true);
      for (int a = 0; a < t; ++a)
        for (int b = a + 1; b < t; ++b)
          if (f.adjacent(want[a], want[b])) g.graph.add_edge(a, b);
      for (int i = 0; i < t; ++i) g.in_labels.push_back(i);
      g.out_labels = g.in_labels;
      return {g, der_atomic(g)};
    }
    Piece chain;
    bool first = true;
    for (int c : children) {
      auto [j, w] = pivot(want, node, c);
      auto child_want = want;
      child_want[j] = w;
      Piece sub = build(c, node, child_want);
      auto k = k_gadget(t, j + 1);
      BilabelledGraph moved = series(series(k, sub.graph), k);
      DerivationPtr moved_der = der_series(der_series(der_atomic(k), sub.der), der_atomic(k));
      auto eye = atomic_i(t, j + 1, t + j + 1);
      Piece piece{parallel(eye, moved), der_parallel(der_atomic(eye), moved_der)};
      if (first) {
        chain = std::move(piece);
        first = false;
      } else {
        chain = {series(chain.graph, piece.graph), der_series(chain.der, piece.der)};
      }
    }
    auto eye_chain = identity_chain(t);
    Piece out{parallel(eye_chain, chain.graph), der_parallel(der_atomic(eye_chain), chain.der)};
    for (int a = 0; a < t; ++a)
      for (int b = a + 1; b < t; ++b)
        if (f.adjacent(want[a], want[b])) {
          auto atom = atomic_a(t, a + 1, b + 1);
          out = {parallel(out.graph, atom), der_parallel(out.der, der_atomic(atom))};
        }
    return out;
  }
};

/// Width-2 decomposition induction for t = 1 (bags of size 3): the result
/// with label pair (x, y) is F_z ⊙ (F_y · F_x) over the child groups keyed
/// by their missing bag vertex.
struct TreewidthTwoBuilder : DecompositionWalk {
  struct Piece {
    BilabelledGraph graph;
    DerivationPtr der;
  };

  Piece group(int node, const std::vector<int>& members, int p, int q) const {
    if (members.empty()) {
      BilabelledGraph atom = f.adjacent(p, q) ? atomic_a(1, 1, 2) : atomic_j(1);
      return {atom, der_atomic(atom)};
    }
    Piece out;
    bool first = true;
    for (int c : members) {
      Piece sub = build(c, node, {p, q});
      if (first) {
        out = std::move(sub);
        first = false;
      } else {
        out = {parallel(out.graph, sub.graph), der_parallel(out.der, sub.der)};
      }
    }
    return out;
  }

  Piece build(int node, int parent, const std::vector<int>& want) const {
    const auto& bag = td.bags[node];
    int x = want[0], y = want[1];
    int z = -1;
    for (int v : bag)
      if (v != x && v != y) z = v;
    if (z < 0) throw std::logic_error("treewidth-two walk: degenerate bag");
    std::vector<int> miss_x, miss_y, miss_z;
    for (int c : children_of(node, parent)) {
      const auto& cb = td.bags[c];
      int missing = -1;
      for (int v : bag)
        if (!std::binary_search(cb.begin(), cb.end(), v)) missing = v;
      if (missing == x)
        miss_x.push_back(c);
      else if (missing == y)
        miss_y.push_back(c);
      else if (missing == z)
        miss_z.push_back(c);
      else
        throw std::logic_error("treewidth-two walk: child bag misses nothing");
    }
    Piece fz = group(node, miss_z, x, y);
    Piece fy = group(node, miss_y, x, z);
    Piece fx = group(node, miss_x, z, y);
    BilabelledGraph chain = series(fy.graph, fx.graph);
    return {parallel(fz.graph, chain), der_parallel(fz.der, der_series(fy.der, fx.der))};
  }
};

inline int pick_tree_root(const TreeDecomposition& td) {
  int best = 0;
  for (int x = 1; x < static_cast<int>(td.bags.size()); ++x)
    if (td.bags[x] < td.bags[best]) best = x;
  return best;
}

inline int pick_path_endpoint(const TreeDecomposition& td) {
  int best = -1;
  for (int x = 0; x < static_cast<int>(td.bags.size()); ++x) {
    if (td.tree.degree(x) > 1) continue;
    if (best < 0 || td.bags[x] < td.bags[best]) best = x;
  }
  return best;
}

inline void check_realizes(const FamilyMember& m, const Graph& f, const char* who) {
  auto got = unlabel(m.graph);
  if (!are_isomorphic(simple_reduct(got), f).has_value())
    throw std::logic_error(std::string(who) + ": construction does not reproduce the input graph");
}

}  // namespace detail

/// L_t member with underlying graph F, for pw(F) <= 2t-1.
inline FamilyMember from_pathwidth(const Graph& f_in, int t, int size_limit = 13) {
  if (t < 1) throw std::invalid_argument("from_pathwidth: t must be >= 1");
  Graph f = f_in;
  if (f.has_any_loop()) throw std::invalid_argument("from_pathwidth: input must be simple");
  if (f.vertex_count() == 0) throw std::invalid_argument("from_pathwidth: empty graph");
  FamilyMember m;
  if (f.vertex_count() <= 2 * t) {
    m = detail::small_graph_atomic(f, t, false, Family::L);
  } else {
    auto [pw, td0] = pathwidth_exact(f, size_limit);
    if (pw > 2 * t - 1)
      throw std::invalid_argument("from_pathwidth: pathwidth " + std::to_string(pw) + " exceeds " + std::to_string(2 * t - 1));
    auto td = smooth_decomposition(f, 2 * t - 1, DecompositionShape::path, size_limit);
    detail::Width2tBuilder builder{{f, td, t}};
    int root = detail::pick_path_endpoint(td);
    auto piece = builder.build(root, -1, td.bags[root]);
    m.family = Family::L;
    m.graph = piece.graph;
    m.derivation = piece.der;
  }
  detail::check_realizes(m, f, "from_pathwidth");
  if (!derivation_in_family(m.derivation, Family::L)) throw std::logic_error("from_pathwidth: derivation outside L_t");
  return m;
}

/// L_t^+ member with underlying graph F, for tw(F) <= 2t-1; for t = 1 the
/// construction extends to tw(F) = 2, matching the identification of L_1^+
/// with the graphs of treewidth at most two.
inline FamilyMember from_treewidth_2t(const Graph& f_in, int t, int size_limit = 13) {
  if (t < 1) throw std::invalid_argument("from_treewidth_2t: t must be >= 1");
  Graph f = f_in;
  if (f.has_any_loop()) throw std::invalid_argument("from_treewidth_2t: input must be simple");
  if (f.vertex_count() == 0) throw std::invalid_argument("from_treewidth_2t: empty graph");
  FamilyMember m;
  if (f.vertex_count() <= 2 * t) {
    m = detail::small_graph_atomic(f, t, false, Family::LPlus);
  } else {
    int tw = treewidth_value(f, size_limit);
    if (tw <= 2 * t - 1) {
      auto td = smooth_decomposition(f, 2 * t - 1, DecompositionShape::tree, size_limit);
      detail::Width2tBuilder builder{{f, td, t}};
      int root = detail::pick_tree_root(td);
      auto piece = builder.build(root, -1, td.bags[root]);
      m.family = Family::LPlus;
      m.graph = piece.graph;
      m.derivation = piece.der;
    } else if (t == 1 && tw == 2) {
      auto td = smooth_decomposition(f, 2, DecompositionShape::tree, size_limit);
      detail::TreewidthTwoBuilder builder{{f, td, 1}};
      int root = detail::pick_tree_root(td);
      auto piece = builder.build(root, -1, {td.bags[root][0], td.bags[root][1]});
      m.family = Family::LPlus;
      m.graph = piece.graph;
      m.derivation = piece.der;
    } else {
      throw std::invalid_argument("from_treewidth_2t: treewidth " + std::to_string(tw) + " exceeds bound");
    }
  }
  detail::check_realizes(m, f, "from_treewidth_2t");
  if (!derivation_in_family(m.derivation, Family::LPlus)) throw std::logic_error("from_treewidth_2t: derivation outside L_t^+");
  return m;
}

/// L_t member with both label tuples equal, for tw(F) <= t-1.
inline FamilyMember from_treewidth_t(const Graph& f_in, int t, int size_limit = 13) {
  if (t < 1) throw std::invalid_argument("from_treewidth_t: t must be >= 1");
  Graph f = f_in;
  if (f.has_any_loop()) throw std::invalid_argument("from_treewidth_t: input must be simple");
  if (f.vertex_count() == 0) throw std::invalid_argument("from_treewidth_t: empty graph");
  FamilyMember m;
  if (f.vertex_count() <= t) {
    m = detail::small_graph_atomic(f, t, true, Family::L);
  } else {
    int tw = treewidth_value(f, size_limit);
    if (tw > t - 1)
      throw std::invalid_argument("from_treewidth_t: treewidth " + std::to_string(tw) + " exceeds " + std::to_string(t - 1));
    auto td = smooth_decomposition(f, t - 1, DecompositionShape::tree, size_limit);
    detail::WidthTBuilder builder{{f, td, t}};
    int root = detail::pick_tree_root(td);
    auto piece = builder.build(root, -1, td.bags[root]);
    m.family = Family::L;
    m.graph = piece.graph;
    m.derivation = piece.der;
  }
  detail::check_realizes(m, f, "from_treewidth_t");
  if (!derivation_in_family(m.derivation, Family::L)) throw std::logic_error("from_treewidth_t: derivation outside L_t");
  return m;
}

// ---------------------------------------------------------------------------
// Outerplanar decomposition into L_1

/// Expansion: a length-two path added between the two labelled vertices
/// (a dangling edge when they coincide).
inline Graph expansion(const BilabelledGraph& f) {
  if (f.t != 1) throw std::invalid_argument("expansion: defined for (1,1)-bilabelled graphs");
  int n = f.graph.vertex_count();
  Graph out(n + 1, true);
  for (auto [u, v] : f.graph.edges()) out.add_edge(u, v);
  out.add_edge_if_absent(f.in_labels[0], n);
  out.add_edge_if_absent(f.out_labels[0], n);
  return out;
}

namespace detail {

struct OpDecomposer {
  struct Piece {
    BilabelledGraph graph;
    DerivationPtr der;
  };

  /// Recursive three-case decomposition of an expansion-outerplanar
  /// (1,1)-bilabelled graph into an L_1 derivation.
  Piece decompose(const Graph& g, int u, int v) const {
    int n = g.vertex_count();
    if (n == 1) {
      auto atom = atomic_i(1, 1, 2);
      return {atom, der_atomic(atom)};
    }
    if (n == 2 && u != v) {
      // A and J are label-swap symmetric, so either orientation matches
      auto atom = g.adjacent(u, v) ? atomic_a(1, 1, 2) : atomic_j(1);
      return {atom, der_atomic(atom)};
    }
    if (u == v) {
      // peel a dangling position off the doubled label
      if (g.degree(u) == 0) {
        int x = u == 0 ? 1 : 0;
        auto inner = decompose(g, u, x);
        auto j = atomic_j(1);
        auto eye = atomic_i(1, 1, 2);
        BilabelledGraph chained = series(inner.graph, j);
        BilabelledGraph res = parallel(eye, chained);
        return {res, der_parallel(der_atomic(eye), der_series(inner.der, der_atomic(j)))};
      }
      int pick = -1;
      for (int x : g.neighbors(u)) {
        // neighbor whose incident edge survives subdivision (always exists
        // for outerplanar g)
        Graph sub(n + 1);
        for (auto [a, b] : g.edges())
          if (!(a == std::min(u, x) && b == std::max(u, x))) sub.add_edge(a, b);
        sub.add_edge(u, n);
        sub.add_edge(x, n);
        if (is_outerplanar(sub)) {
          pick = x;
          break;
        }
      }
      if (pick < 0) throw std::invalid_argument("op_to_l1: no subdividable edge; expansion is not outerplanar");
      Graph without = g;
      without.remove_edge(u, pick);
      auto inner = decompose(without, u, pick);
      auto a = atomic_a(1, 1, 2);
      auto j = atomic_j(1);
      auto eye = atomic_i(1, 1, 2);
      BilabelledGraph restored = parallel(a, inner.graph);
      BilabelledGraph chained = series(restored, j);
      BilabelledGraph res = parallel(eye, chained);
      return {res, der_parallel(der_atomic(eye), der_series(der_parallel(der_atomic(a), inner.der), der_atomic(j)))};
    }
    if (g.adjacent(u, v)) {
      Graph without = g;
      without.remove_edge(u, v);
      auto inner = decompose(without, u, v);
      auto a = atomic_a(1, 1, 2);
      return {parallel(a, inner.graph), der_parallel(der_atomic(a), inner.der)};
    }
    // u != v, non-adjacent: split at a separating vertex (same component) or
    // across components
    auto comp = component_ids(g);
    if (comp[u] == comp[v]) {
      int cut = -1;
      for (int x = 0; x < n && cut < 0; ++x) {
        if (x == u || x == v) continue;
        std::vector<int> keep;
        for (int y = 0; y < n; ++y)
          if (y != x) keep.push_back(y);
        Graph rest = induced_subgraph(g, keep);
        auto ids = component_ids(rest);
        auto pos = [&](int y) { return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), y) - keep.begin()); };
        if (ids[pos(u)] != ids[pos(v)]) cut = x;
      }
      if (cut < 0) throw std::invalid_argument("op_to_l1: two disjoint paths between labels; expansion is not outerplanar");
      std::vector<int> keep;
      for (int y = 0; y < n; ++y)
        if (y != cut) keep.push_back(y);
      Graph rest = induced_subgraph(g, keep);
      auto ids = component_ids(rest);
      auto pos = [&](int y) { return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), y) - keep.begin()); };
      std::vector<int> left{cut}, right{cut};
      for (int y : keep)
        (ids[pos(y)] == ids[pos(u)] ? left : right).push_back(y);
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());
      auto lpos = [&](int y) { return static_cast<int>(std::lower_bound(left.begin(), left.end(), y) - left.begin()); };
      auto rpos = [&](int y) { return static_cast<int>(std::lower_bound(right.begin(), right.end(), y) - right.begin()); };
      auto k = decompose(induced_subgraph(g, left), lpos(u), lpos(cut));
      auto l = decompose(induced_subgraph(g, right), rpos(cut), rpos(v));
      return {series(k.graph, l.graph), der_series(k.der, l.der)};
    }
    // separate components
    std::vector<int> side_a, side_b;
    for (int y = 0; y < n; ++y)
      (comp[y] == comp[v] ? side_b : side_a).push_back(y);
    auto apos = [&](int y) { return static_cast<int>(std::lower_bound(side_a.begin(), side_a.end(), y) - side_a.begin()); };
    auto bpos = [&](int y) { return static_cast<int>(std::lower_bound(side_b.begin(), side_b.end(), y) - side_b.begin()); };
    auto j = atomic_j(1);
    if (static_cast<int>(side_a.size()) >= 2) {
      auto k = decompose(induced_subgraph(g, side_a), apos(u), apos(u));
      auto l = decompose(induced_subgraph(g, side_b), bpos(v), bpos(v));
      BilabelledGraph right = series(j, l.graph);
      return {series(k.graph, right), der_series(k.der, der_series(der_atomic(j), l.der))};
    }
    auto k = decompose(induced_subgraph(g, side_a), apos(u), apos(u));
    auto l = decompose(induced_subgraph(g, side_b), bpos(v), bpos(v));
    BilabelledGraph left = series(k.graph, j);
    return {series(left, l.graph), der_series(der_series(k.der, der_atomic(j)), l.der)};
  }
};

}  // namespace detail

/// L_1 derivation of a (1,1)-bilabelled graph whose expansion is
/// outerplanar; errors carry the forbidden minor witness otherwise.
inline FamilyMember op_to_l1(const BilabelledGraph& f, int size_limit = 13) {
  if (f.t != 1) throw std::invalid_argument("op_to_l1: defined for (1,1)-bilabelled graphs");
  f.validate();
  if (f.graph.has_any_loop()) throw std::invalid_argument("op_to_l1: input must be loop-free");
  if (f.graph.vertex_count() > size_limit)
    throw size_limit_error("op_to_l1: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  if (auto w = outerplanarity_obstruction(expansion(f))) {
    throw std::invalid_argument("op_to_l1: expansion has a " + w->pattern + " minor (branch vertices " +
                                [&] {
                                  std::string s;
                                  for (int v : w->branch_vertices) s += std::to_string(v) + " ";
                                  return s;
                                }());
  }
  detail::OpDecomposer dec;
  auto piece = dec.decompose(f.graph, f.in_labels[0], f.out_labels[0]);
  FamilyMember m;
  m.family = Family::L;
  m.graph = piece.graph;
  m.derivation = piece.der;
  if (!are_isomorphic(simple_reduct(unlabel(m.graph)), simple_reduct(f.graph)).has_value())
    throw std::logic_error("op_to_l1: decomposition does not reproduce the input graph");
  if (!derivation_in_family(m.derivation, Family::L)) throw std::logic_error("op_to_l1: derivation outside L_1");
  return m;
}

// ---------------------------------------------------------------------------
// Dumps

/// One member per line: serialization, tab, derivation s-expression.
inline std::string dump_family(const std::vector<FamilyMember>& members) {
  std::ostringstream out;
  for (const auto& m : members) out << serialize_bilabelled(m.graph) << "\t" << derivation_sexpr(m.derivation) << "\n";
  return out.str();
}

inline std::string family_cache_name(int t, Family family, const EnumerationBudget& b) {
  std::ostringstream out;
  out << "family_t" << t << "_" << family_name(family) << "_v" << b.max_vertices << "_d" << b.max_depth
      << (b.with_loops ? "_loops" : "") << ".txt";
  return out.str();
}

}  // namespace homdist
