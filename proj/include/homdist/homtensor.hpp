#pragma once

#include "homdist/bilabelled.hpp"
#include "homdist/decomposition.hpp"
#include "homdist/graph.hpp"
#include "homdist/numeric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace homdist {

namespace detail {

inline Integer ipow(long long base, int exp) {
  Integer r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline long long checked_pow(int n, int t) {
  Integer p = ipow(n, t);
  if (p > Integer(1) << 32) throw size_limit_error("tensor index space too large: " + std::to_string(n) + "^" + std::to_string(t));
  return static_cast<long long>(p);
}

}  // namespace detail

/// Dense tensor indexed by V(G)^t x V(G)^t. Index tuples are encoded base-n
/// with the first tuple entry as the most significant digit.
template <typename T>
struct Tensor {
  int t = 0;
  int n = 0;
  std::vector<T> a;

  Tensor() = default;
  Tensor(int t_, int n_) : t(t_), n(n_) {
    long long side = detail::checked_pow(n, t);
    a.assign(static_cast<std::size_t>(side * side), T(0));
  }

  long long side() const {
    long long s = 1;
    for (int i = 0; i < t; ++i) s *= n;
    return s;
  }

  T& at(long long r, long long c) { return a[static_cast<std::size_t>(r * side() + c)]; }
  const T& at(long long r, long long c) const { return a[static_cast<std::size_t>(r * side() + c)]; }

  bool operator==(const Tensor& o) const { return t == o.t && n == o.n && a == o.a; }
};

using HomTensor = Tensor<Integer>;
using RationalTensor = Tensor<Rational>;

// ---------------------------------------------------------------------------
// Tuple encoding helpers

inline long long encode_tuple(const std::vector<int>& tup, int n) {
  long long idx = 0;
  for (int d : tup) idx = idx * n + d;
  return idx;
}

inline std::vector<int> decode_tuple(long long idx, int k, int n) {
  std::vector<int> out(k);
  for (int i = k - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % n);
    idx /= n;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphism counting

namespace detail {

/// DFS over the remaining vertices of F in `order`, counting extensions of
/// the partial map `img`. Placed-neighbor edge checks prune prefixes.
template <typename Count>
inline void hom_extend(const Graph& f, const Graph& g, const std::vector<int>& order, std::size_t pos,
                       std::vector<int>& img, Count& acc) {
  if (pos == order.size()) {
    ++acc;
    return;
  }
  int v = order[pos];
  for (int target = 0; target < g.vertex_count(); ++target) {
    bool ok = !f.adjacent(v, v) || g.adjacent(target, target);
    if (ok)
      for (int u : f.neighbors(v)) {
        if (img[u] < 0) continue;
        if (!g.adjacent(img[u], target)) {
          ok = false;
          break;
        }
      }
    if (!ok) continue;
    img[v] = target;
    hom_extend(f, g, order, pos + 1, img, acc);
    img[v] = -1;
  }
}

/// Vertices not yet placed, ordered greedily by connection to placed ones.
inline std::vector<int> extension_order(const Graph& f, const std::vector<int>& img) {
  int n = f.vertex_count();
  std::vector<char> placed(n, 0);
  for (int v = 0; v < n; ++v) placed[v] = img[v] >= 0;
  std::vector<int> order;
  for (int step = 0; step < n; ++step) {
    int best = -1, best_score = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      int score = 0;
      for (int u : f.neighbors(v))
        if (placed[u]) ++score;
      if (score > best_score) {
        best = v;
        best_score = score;
      }
    }
    if (best < 0) break;
    placed[best] = 1;
    order.push_back(best);
  }
  return order;
}

}  // namespace detail

/// Exact number of homomorphisms F -> G by pruned brute force.
inline Integer hom_count(const Graph& f, const Graph& g, int f_limit = 10, int g_limit = 13) {
  if (f.vertex_count() > f_limit)
    throw size_limit_error("hom_count: refusing |V(F)| beyond " + std::to_string(f_limit));
  if (g.vertex_count() > g_limit)
    throw size_limit_error("hom_count: refusing |V(G)| beyond " + std::to_string(g_limit));
  if (f.vertex_count() == 0) return 1;
  if (g.vertex_count() == 0) return 0;
  std::vector<int> img(f.vertex_count(), -1);
  auto order = detail::extension_order(f, img);
  if (detail::ipow(g.vertex_count(), f.vertex_count()) < (Integer(1) << 62)) {
    unsigned long long acc = 0;
    detail::hom_extend(f, g, order, 0, img, acc);
    return Integer(acc);
  }
  Integer acc = 0;
  detail::hom_extend(f, g, order, 0, img, acc);
  return acc;
}

/// Homomorphism count via dynamic programming over a tree decomposition of
/// F; equals hom_count on valid inputs.
inline Integer hom_count_td(const Graph& f, const TreeDecomposition& td, const Graph& g) {
  auto complaint = validate_decomposition(f, td);
  if (!complaint.empty()) throw std::invalid_argument("hom_count_td: invalid decomposition: " + complaint);
  if (f.vertex_count() == 0) return 1;
  if (g.vertex_count() == 0) return 0;
  int m = static_cast<int>(td.bags.size());
  int n = g.vertex_count();

  // rooted DFS order
  std::vector<int> parent(m, -2), order;
  {
    std::vector<int> stack{0};
    parent[0] = -1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      order.push_back(x);
      for (int y : td.tree.neighbors(x))
        if (parent[y] == -2) {
          parent[y] = x;
          stack.push_back(y);
        }
    }
  }

  auto assignment_respects = [&](const std::vector<int>& bag, const std::vector<int>& img) {
    for (std::size_t i = 0; i < bag.size(); ++i)
      for (std::size_t j = i; j < bag.size(); ++j)
        if (f.adjacent(bag[i], bag[j]) && !g.adjacent(img[i], img[j])) return false;
    return true;
  };

  // child tables projected onto the shared vertices with the parent bag
  std::vector<std::map<std::vector<int>, Integer>> projected(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    const auto& bag = td.bags[x];
    int k = static_cast<int>(bag.size());
    std::vector<int> shared_pos;  // positions of bag shared with parent bag
    if (parent[x] >= 0) {
      const auto& pbag = td.bags[parent[x]];
      for (int i = 0; i < k; ++i)
        if (std::binary_search(pbag.begin(), pbag.end(), bag[i])) shared_pos.push_back(i);
    }
    std::vector<int> children;
    for (int y : td.tree.neighbors(x))
      if (parent[y] == x) children.push_back(y);
    std::vector<std::vector<int>> child_shared_pos(children.size());
    for (std::size_t c = 0; c < children.size(); ++c) {
      const auto& cbag = td.bags[children[c]];
      for (int v : cbag)
        if (std::binary_search(bag.begin(), bag.end(), v))
          child_shared_pos[c].push_back(static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin()));
    }

    std::map<std::vector<int>, Integer> table;  // key: images of shared-with-parent vertices
    std::vector<int> img(k, 0);
    long long total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    for (long long code = 0; code < total; ++code) {
      long long c2 = code;
      for (int i = k - 1; i >= 0; --i) {
        img[i] = static_cast<int>(c2 % n);
        c2 /= n;
      }
      if (!assignment_respects(bag, img)) continue;
      Integer value = 1;
      bool dead = false;
      for (std::size_t c = 0; c < children.size(); ++c) {
        std::vector<int> key;
        for (int p : child_shared_pos[c]) key.push_back(img[p]);
        auto found = projected[children[c]].find(key);
        if (found == projected[children[c]].end()) {
          dead = true;
          break;
        }
        value *= found->second;
      }
      if (dead) continue;
      std::vector<int> key;
      for (int p : shared_pos) key.push_back(img[p]);
      table[key] += value;
    }
    if (parent[x] < 0) {
      Integer sum = 0;
      for (auto& [key, v] : table) sum += v;
      return sum;
    }
    // child key order must match how the parent reads it: shared vertices of
    // the child bag in child-bag position order equals ascending vertex id,
    // same as the parent's lookup order
    projected[x] = std::move(table);
  }
  return 0;  // unreachable
}

/// Homomorphism tensor of a bilabelled graph: entry (x, y) counts
/// homomorphisms pinning in-labels to x and out-labels to y. Enumeration
/// fixes the distinct labelled vertices per entry and extends over the
/// unlabelled ones.
inline HomTensor hom_tensor(const BilabelledGraph& f, const Graph& g, int unlabeled_limit = 10, int g_limit = 13) {
  f.validate();
  if (g.vertex_count() > g_limit)
    throw size_limit_error("hom_tensor: refusing |V(G)| beyond " + std::to_string(g_limit));
  int nf = f.graph.vertex_count();
  int n = g.vertex_count();
  std::vector<int> labeled;
  for (int p = 1; p <= 2 * f.t; ++p) labeled.push_back(f.label_at(p));
  std::sort(labeled.begin(), labeled.end());
  labeled.erase(std::unique(labeled.begin(), labeled.end()), labeled.end());
  int u = nf - static_cast<int>(labeled.size());
  if (u > unlabeled_limit)
    throw size_limit_error("hom_tensor: refusing " + std::to_string(u) + " unlabelled vertices");
  HomTensor out(f.t, n);
  if (n == 0) return out;

  std::vector<int> img(nf, -1);
  long long combos = 1;
  for (std::size_t i = 0; i < labeled.size(); ++i) combos *= n;
  bool small = detail::ipow(n, nf) < (Integer(1) << 62);
  for (long long code = 0; code < combos; ++code) {
    long long c2 = code;
    for (auto it = labeled.rbegin(); it != labeled.rend(); ++it) {
      img[*it] = static_cast<int>(c2 % n);
      c2 /= n;
    }
    // edges within the labelled set
    bool ok = true;
    for (int a : labeled) {
      if (f.graph.adjacent(a, a) && !g.adjacent(img[a], img[a])) ok = false;
      for (int b : labeled)
        if (a < b && f.graph.adjacent(a, b) && !g.adjacent(img[a], img[b])) ok = false;
    }
    Integer count = 0;
    if (ok) {
      auto order = detail::extension_order(f.graph, img);
      if (small) {
        unsigned long long acc = 0;
        detail::hom_extend(f.graph, g, order, 0, img, acc);
        count = Integer(acc);
      } else {
        detail::hom_extend(f.graph, g, order, 0, img, count);
      }
    }
    if (count != 0) {
      std::vector<int> row(f.t), col(f.t);
      for (int i = 0; i < f.t; ++i) row[i] = img[f.in_labels[i]];
      for (int i = 0; i < f.t; ++i) col[i] = img[f.out_labels[i]];
      out.at(encode_tuple(row, n), encode_tuple(col, n)) = count;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tensor operations

template <typename T>
inline Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.t != b.t || a.n != b.n) throw std::invalid_argument("matmul: shape mismatch");
  Tensor<T> out(a.t, a.n);
  long long s = a.side();
  for (long long i = 0; i < s; ++i)
    for (long long k = 0; k < s; ++k) {
      const T& aik = a.at(i, k);
      if (aik == T(0)) continue;
      for (long long j = 0; j < s; ++j) {
        const T& bkj = b.at(k, j);
        if (bkj == T(0)) continue;
        out.at(i, j) += aik * bkj;
      }
    }
  return out;
}

template <typename T>
inline Tensor<T> schur(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.t != b.t || a.n != b.n) throw std::invalid_argument("schur: shape mismatch");
  Tensor<T> out(a.t, a.n);
  for (std::size_t i = 0; i < a.a.size(); ++i) out.a[i] = a.a[i] * b.a[i];
  return out;
}

/// Coordinate action matching the label action: sigma_act(F_G, sigma) equals
/// hom_tensor(permute_labels(F, sigma), G).
template <typename T>
inline Tensor<T> sigma_act(const Tensor<T>& a, const std::vector<int>& sigma) {
  int k = 2 * a.t;
  if (static_cast<int>(sigma.size()) != k) throw std::invalid_argument("sigma_act: permutation size mismatch");
  std::vector<int> inv(k);
  for (int p = 0; p < k; ++p) inv[sigma[p]] = p;
  Tensor<T> out(a.t, a.n);
  long long s = a.side();
  for (long long r = 0; r < s; ++r)
    for (long long c = 0; c < s; ++c) {
      auto rd = decode_tuple(r, a.t, a.n);
      auto cd = decode_tuple(c, a.t, a.n);
      std::vector<int> w(k);
      for (int i = 0; i < a.t; ++i) w[i] = rd[i];
      for (int i = 0; i < a.t; ++i) w[a.t + i] = cd[i];
      std::vector<int> w2(k);
      for (int q = 0; q < k; ++q) w2[q] = w[inv[q]];
      std::vector<int> r2(w2.begin(), w2.begin() + a.t), c2(w2.begin() + a.t, w2.end());
      out.at(r, c) = a.at(encode_tuple(r2, a.n), encode_tuple(c2, a.n));
    }
  return out;
}

template <typename T>
inline Tensor<T> transpose(const Tensor<T>& a) {
  Tensor<T> out(a.t, a.n);
  long long s = a.side();
  for (long long r = 0; r < s; ++r)
    for (long long c = 0; c < s; ++c) out.at(r, c) = a.at(c, r);
  return out;
}

template <typename T>
inline T soe(const Tensor<T>& a) {
  T s(0);
  for (const auto& x : a.a) s += x;
  return s;
}

template <typename T>
inline T trace(const Tensor<T>& a) {
  T s(0);
  for (long long r = 0; r < a.side(); ++r) s += a.at(r, r);
  return s;
}

inline RationalTensor to_rational(const HomTensor& a) {
  RationalTensor out(a.t, a.n);
  for (std::size_t i = 0; i < a.a.size(); ++i) out.a[i] = Rational(a.a[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Quantum graphs

/// Finite rational linear combination of (t,t)-bilabelled graphs.
struct QuantumGraph {
  std::vector<std::pair<Rational, BilabelledGraph>> terms;

  int arity() const {
    if (terms.empty()) throw std::invalid_argument("QuantumGraph: no terms");
    int t = terms.front().second.t;
    for (auto& [c, f] : terms)
      if (f.t != t) throw std::invalid_argument("QuantumGraph: arity mismatch between terms");
    return t;
  }
};

inline RationalTensor quantum_eval(const QuantumGraph& q, const Graph& g, int unlabeled_limit = 10, int g_limit = 13) {
  int t = q.arity();
  RationalTensor out(t, g.vertex_count());
  for (auto& [coeff, f] : q.terms) {
    HomTensor ht = hom_tensor(f, g, unlabeled_limit, g_limit);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += coeff * Rational(ht.a[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Algebra dimension (partially coherent / coherent closures)

enum class AlgebraVariant { partially_coherent, coherent };

namespace detail {

/// Incremental exact row reduction over the rationals.
class RationalSpan {
 public:
  explicit RationalSpan(std::size_t dim) : dim_(dim) {}

  /// Returns true (and stores a normalized copy) if v was independent.
  bool insert(std::vector<Rational> v) {
    for (auto& [pivot, row] : rows_) {
      Rational c = v[pivot];  // by value: the loop overwrites v[pivot]
      if (c != 0)
        for (std::size_t i = pivot; i < dim_; ++i) v[i] -= c * row[i];
    }
    std::size_t pivot = dim_;
    for (std::size_t i = 0; i < dim_; ++i)
      if (v[i] != 0) {
        pivot = i;
        break;
      }
    if (pivot == dim_) return false;
    Rational lead = v[pivot];
    for (std::size_t i = pivot; i < dim_; ++i) v[i] /= lead;
    rows_.push_back({pivot, std::move(v)});
    std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

}  // namespace detail

/// Dimension of the closure of the atomic homomorphism tensors under linear
/// span, matrix product, adjoint, the sigma action, and Schur products
/// (restricted to atomic tensors for the partially coherent variant).
/// Generation iterates to a rank fixpoint; the rank is bounded by n^{2t}.
inline int algebra_dimension(const Graph& g, int t, AlgebraVariant variant, int side_limit = 64) {
  int n = g.vertex_count();
  long long side = detail::checked_pow(n, t);
  if (side > side_limit)
    throw size_limit_error("algebra_dimension: refusing n^t beyond " + std::to_string(side_limit));
  std::size_t dim = static_cast<std::size_t>(side * side);

  std::vector<RationalTensor> atomics;
  for (auto& a : enumerate_atomic(t, false)) atomics.push_back(to_rational(hom_tensor(a, g)));

  detail::RationalSpan span(dim);
  std::vector<RationalTensor> basis;
  auto offer = [&](const RationalTensor& m) {
    if (span.insert(m.a)) {
      basis.push_back(m);
      return true;
    }
    return false;
  };
  for (auto& a : atomics) offer(a);

  auto sigmas = detail::all_permutations(2 * t);
  std::size_t fresh_from = 0;
  while (fresh_from < basis.size()) {
    std::size_t frontier_begin = fresh_from;
    std::size_t frontier_end = basis.size();
    fresh_from = frontier_end;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      offer(transpose(basis[i]));
      for (auto& s : sigmas) offer(sigma_act(basis[i], s));
      for (std::size_t j = 0; j < basis.size() && j < frontier_end; ++j) {
        offer(matmul(basis[i], basis[j]));
        if (j < frontier_begin) offer(matmul(basis[j], basis[i]));
        if (variant == AlgebraVariant::coherent) {
          offer(schur(basis[i], basis[j]));
        }
      }
      if (variant == AlgebraVariant::partially_coherent)
        for (auto& a : atomics) offer(schur(basis[i], a));
    }
  }
  return static_cast<int>(span.rank());
}

}  // namespace homdist
