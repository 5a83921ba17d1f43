#pragma once

#include "homdist/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace homdist {

namespace detail {

/// One round of color refinement: signature = (color, loop flag, sorted
/// neighbor colors). Returns dense ids ordered by signature so refinement is
/// deterministic. Initial colors must already be dense-comparable.
inline std::vector<int> refine_once(const Graph& g, const std::vector<int>& col) {
  int n = g.vertex_count();
  std::vector<std::pair<std::vector<int>, int>> sig(n);
  for (int v = 0; v < n; ++v) {
    std::vector<int> s;
    s.push_back(col[v]);
    s.push_back(g.allows_loops() && g.has_loop(v) ? 1 : 0);
    std::vector<int> nb;
    for (int u : g.neighbors(v)) nb.push_back(col[u]);
    std::sort(nb.begin(), nb.end());
    s.insert(s.end(), nb.begin(), nb.end());
    sig[v] = {std::move(s), v};
  }
  std::map<std::vector<int>, int> ids;
  for (auto& [s, v] : sig) ids.emplace(s, 0);
  int next = 0;
  for (auto& [s, id] : ids) id = next++;
  std::vector<int> out(n);
  for (auto& [s, v] : sig) out[v] = ids[s];
  return out;
}

inline std::vector<int> refine_to_stable(const Graph& g, std::vector<int> col) {
  auto classes = [](const std::vector<int>& c) { return c.empty() ? 0 : 1 + *std::max_element(c.begin(), c.end()); };
  int prev = classes(col);
  for (;;) {
    auto next = refine_once(g, col);
    int cnt = classes(next);
    col = std::move(next);
    if (cnt == prev) return col;
    prev = cnt;
  }
}

inline void append_u32(std::string& s, std::uint32_t x) {
  s.push_back(static_cast<char>(x >> 24));
  s.push_back(static_cast<char>(x >> 16));
  s.push_back(static_cast<char>(x >> 8));
  s.push_back(static_cast<char>(x));
}

inline void append_u64(std::string& s, std::uint64_t x) {
  append_u32(s, static_cast<std::uint32_t>(x >> 32));
  append_u32(s, static_cast<std::uint32_t>(x));
}

}  // namespace detail

struct CanonicalResult {
  std::vector<int> perm;  // new index -> old vertex
  std::string key;
};

/// Canonical form of a vertex-colored graph. Keys of two colored graphs are
/// equal iff there is a color-preserving isomorphism, where the init values
/// themselves (not their ranks) must be preserved. Individualization +
/// refinement with exhaustive backtracking; intended for small graphs.
inline CanonicalResult canonical_form(const Graph& g, const std::vector<std::uint64_t>& init) {
  int n = g.vertex_count();
  if (static_cast<int>(init.size()) != n) throw std::invalid_argument("canonical_form: color count mismatch");

  // dense ranks of init values; the value table is embedded in the key
  std::vector<std::uint64_t> values(init);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<int> base(n);
  for (int v = 0; v < n; ++v)
    base[v] = static_cast<int>(std::lower_bound(values.begin(), values.end(), init[v]) - values.begin());

  std::string prefix;
  detail::append_u32(prefix, static_cast<std::uint32_t>(n));
  detail::append_u32(prefix, static_cast<std::uint32_t>(values.size()));
  for (auto v : values) detail::append_u64(prefix, v);

  auto encode = [&](const std::vector<int>& order) {
    std::string key = prefix;
    for (int v : order) detail::append_u32(key, static_cast<std::uint32_t>(base[v]));
    int acc = 0, fill = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        acc = (acc << 1) | (g.adjacent(order[i], order[j]) ? 1 : 0);
        if (++fill == 8) {
          key.push_back(static_cast<char>(acc));
          acc = 0;
          fill = 0;
        }
      }
    if (fill) key.push_back(static_cast<char>(acc << (8 - fill)));
    return key;
  };

  std::optional<std::string> best;
  std::vector<int> best_order;

  auto order_of = [&](const std::vector<int>& col) {
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[col[v]] = v;
    return order;
  };

  std::vector<int> start(n);
  // combine init rank into a dense starting color
  {
    std::map<int, int> ids;
    for (int v = 0; v < n; ++v) ids.emplace(base[v], 0);
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    for (int v = 0; v < n; ++v) start[v] = ids[base[v]];
  }

  struct Frame {
    std::vector<int> col;
  };
  std::vector<Frame> stack{{detail::refine_to_stable(g, start)}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    int classes = n == 0 ? 0 : 1 + *std::max_element(f.col.begin(), f.col.end());
    if (classes == n) {
      auto key = encode(order_of(f.col));
      if (!best || key < *best) {
        best = key;
        best_order = order_of(f.col);
      }
      continue;
    }
    // first non-singleton class
    std::vector<int> size(classes, 0);
    for (int v = 0; v < n; ++v) ++size[f.col[v]];
    int target = 0;
    while (size[target] < 2) ++target;
    for (int v = n - 1; v >= 0; --v) {
      if (f.col[v] != target) continue;
      std::vector<int> col = f.col;
      for (int u = 0; u < n; ++u)
        if (col[u] >= target && u != v) ++col[u];
      // v keeps color `target`, others in its class shifted up
      stack.push_back({detail::refine_to_stable(g, col)});
    }
  }
  if (n == 0) return {{}, encode({})};
  return {best_order, *best};
}

inline std::string canonical_key(const Graph& g) {
  return canonical_form(g, std::vector<std::uint64_t>(g.vertex_count(), 0)).key;
}

namespace detail {

/// Joint stable refinement of two graphs with shared color ids.
inline bool joint_refine(const Graph& g, const Graph& h, std::vector<int>& cg, std::vector<int>& ch) {
  // ids are re-densified every round, so progress is measured by the joint
  // class count, which only grows under refinement
  auto cls = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> s(a.begin(), a.end());
    s.insert(b.begin(), b.end());
    return static_cast<int>(s.size());
  };
  for (;;) {
    int ng = g.vertex_count(), nh = h.vertex_count();
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sg(ng), sh(nh);
    auto sig = [&](const Graph& gr, const std::vector<int>& col, int v) {
      std::vector<int> s{col[v], gr.allows_loops() && gr.has_loop(v) ? 1 : 0};
      std::vector<int> nb;
      for (int u : gr.neighbors(v)) nb.push_back(col[u]);
      std::sort(nb.begin(), nb.end());
      s.insert(s.end(), nb.begin(), nb.end());
      return s;
    };
    for (int v = 0; v < ng; ++v) ids.emplace(sg[v] = sig(g, cg, v), 0);
    for (int v = 0; v < nh; ++v) ids.emplace(sh[v] = sig(h, ch, v), 0);
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    std::vector<int> ncg(ng), nch(nh);
    for (int v = 0; v < ng; ++v) ncg[v] = ids[sg[v]];
    for (int v = 0; v < nh; ++v) nch[v] = ids[sh[v]];
    int before = cls(cg, ch), after = cls(ncg, nch);
    cg = std::move(ncg);
    ch = std::move(nch);
    if (after == before) break;
  }
  std::map<int, int> hg, hh;
  for (int x : cg) ++hg[x];
  for (int x : ch) ++hh[x];
  return hg == hh;
}

inline bool iso_search(const Graph& g, const Graph& h, std::vector<int> cg, std::vector<int> ch, std::vector<int>& out) {
  if (!joint_refine(g, h, cg, ch)) return false;
  int n = g.vertex_count();
  // histograms match; discrete iff every class is a singleton per side
  std::map<int, std::vector<int>> classes_g, classes_h;
  for (int v = 0; v < n; ++v) classes_g[cg[v]].push_back(v);
  for (int v = 0; v < n; ++v) classes_h[ch[v]].push_back(v);
  int target = -1;
  for (auto& [c, vs] : classes_g)
    if (vs.size() > 1) {
      target = c;
      break;
    }
  if (target < 0) {
    std::vector<int> map(n, -1);
    for (auto& [c, vs] : classes_g) map[vs[0]] = classes_h[c][0];
    for (int u = 0; u < n; ++u)
      for (int v = u; v < n; ++v)
        if (g.adjacent(u, v) != h.adjacent(map[u], map[v])) return false;
    out = map;
    return true;
  }
  int fresh = 0;
  for (int v = 0; v < n; ++v) fresh = std::max({fresh, cg[v] + 1, ch[v] + 1});
  int u = classes_g[target][0];
  for (int w : classes_h[target]) {
    auto ncg = cg, nch = ch;
    ncg[u] = fresh;
    nch[w] = fresh;
    if (iso_search(g, h, ncg, nch, out)) return true;
  }
  return false;
}

}  // namespace detail

/// Edge-preserving bijection V(G) -> V(H) if one exists. The result is
/// re-verified against both edge sets before being returned.
inline std::optional<std::vector<int>> are_isomorphic(const Graph& g, const Graph& h, int size_limit = 64) {
  if (g.vertex_count() > size_limit || h.vertex_count() > size_limit)
    throw size_limit_error("are_isomorphic: refusing graphs beyond " + std::to_string(size_limit) + " vertices");
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return std::nullopt;
  if (g.degree_sequence() != h.degree_sequence()) return std::nullopt;
  std::vector<int> map;
  std::vector<int> cg(g.vertex_count(), 0), ch(h.vertex_count(), 0);
  if (!detail::iso_search(g, h, cg, ch, map)) return std::nullopt;
  return map;
}

inline bool is_isomorphism(const Graph& g, const Graph& h, const std::vector<int>& map) {
  int n = g.vertex_count();
  if (h.vertex_count() != n || static_cast<int>(map.size()) != n) return false;
  std::vector<char> used(n, 0);
  for (int v : map) {
    if (v < 0 || v >= n || used[v]) return false;
    used[v] = 1;
  }
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v)
      if (g.adjacent(u, v) != h.adjacent(map[u], map[v])) return false;
  return true;
}

}  // namespace homdist
