#pragma once

#include "homdist/graph.hpp"
#include "homdist/homtensor.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace homdist {

/// Stable coloring of V(G)^{2t} (or V(G)^k for k-WL). Ids are dense and
/// shared with the partner graph of the joint refinement that produced it.
struct Coloring {
  int t = 0;      // tuples have length 2t (mwl) or k (k-WL stored as t=k, see users)
  int n = 0;
  std::vector<int> color;  // indexed by encoded tuple
  int rounds = 0;
  int num_classes = 0;
};

enum class Verdict { indistinguishable, distinguished };

struct RefinementResult {
  Coloring left, right;
  Verdict verdict = Verdict::distinguished;
  std::string detail;                 // set when short-circuited
  std::vector<int> classes_per_round; // joint class counts after each full round
};

namespace detail {

class Interner {
 public:
  int id(const std::vector<long long>& sig) {
    auto [it, inserted] = ids_.try_emplace(sig, static_cast<int>(ids_.size()));
    (void)inserted;
    return it->second;
  }
  int size() const { return static_cast<int>(ids_.size()); }

 private:
  std::map<std::vector<long long>, int> ids_;
};

inline bool multisets_equal(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace detail

/// Joint t-dimensional mwl refinement of two graphs. Round 0 colors each
/// 2t-tuple by its rel type; each half-round records the ordered family of
/// colors over all label permutations (enumerated in lexicographic one-line
/// order); each full round appends the multiset over middle t-tuples of
/// color pairs. Interning is shared, so color ids are comparable across the
/// two graphs. The verdict compares the stable color multisets.
inline RefinementResult mwl_stable(const Graph& g, const Graph& h, int t, long long tuple_limit = 1 << 16) {
  if (t < 1) throw std::invalid_argument("mwl_stable: t must be >= 1");
  RefinementResult res;
  if (g.vertex_count() != h.vertex_count()) {
    res.verdict = Verdict::distinguished;
    res.detail = "vertex counts differ";
    return res;
  }
  int n = g.vertex_count();
  long long side = detail::checked_pow(n, t);
  long long space = side * side;
  if (space > tuple_limit)
    throw size_limit_error("mwl_stable: refusing tuple space " + std::to_string(space));
  if (n == 0) {
    res.verdict = Verdict::indistinguishable;
    return res;
  }

  auto sigmas = detail::all_permutations(2 * t);
  std::vector<std::vector<long long>> sigma_index(sigmas.size(), std::vector<long long>(space));
  {
    std::vector<int> w(2 * t);
    for (long long idx = 0; idx < space; ++idx) {
      long long c = idx;
      for (int i = 2 * t - 1; i >= 0; --i) {
        w[i] = static_cast<int>(c % n);
        c /= n;
      }
      for (std::size_t s = 0; s < sigmas.size(); ++s) {
        long long permuted = 0;
        for (int i = 0; i < 2 * t; ++i) permuted = permuted * n + w[sigmas[s][i]];
        sigma_index[s][idx] = permuted;
      }
    }
  }

  std::vector<int> cg(space), ch(space);
  {
    detail::Interner intern;
    std::vector<int> w(2 * t);
    auto init = [&](const Graph& gr, std::vector<int>& col) {
      for (long long idx = 0; idx < space; ++idx) {
        long long c = idx;
        for (int i = 2 * t - 1; i >= 0; --i) {
          w[i] = static_cast<int>(c % n);
          c /= n;
        }
        auto rt = rel_type(gr, w).encode();
        std::vector<long long> sig(rt.begin(), rt.end());
        col[idx] = intern.id(sig);
      }
    };
    init(g, cg);
    init(h, ch);
    res.classes_per_round.push_back(intern.size());
  }

  int rounds = 0;
  for (;;) {
    // half round: ordered sigma-orbit colors
    std::vector<int> hg(space), hh(space);
    {
      detail::Interner intern;
      auto half = [&](const std::vector<int>& col, std::vector<int>& out) {
        std::vector<long long> sig(sigmas.size());
        for (long long idx = 0; idx < space; ++idx) {
          for (std::size_t s = 0; s < sigmas.size(); ++s) sig[s] = col[sigma_index[s][idx]];
          out[idx] = intern.id(sig);
        }
      };
      half(cg, hg);
      half(ch, hh);
    }
    // full round: multiset over middle tuples
    std::vector<int> ng(space), nh(space);
    int joint_classes;
    {
      detail::Interner intern;
      long long palette = space * 2 + 1;
      auto full = [&](const std::vector<int>& half, std::vector<int>& out) {
        std::vector<long long> pairs(side);
        for (long long r = 0; r < side; ++r)
          for (long long s = 0; s < side; ++s) {
            for (long long m = 0; m < side; ++m)
              pairs[m] = half[r * side + m] * palette + half[m * side + s];
            std::sort(pairs.begin(), pairs.end());
            std::vector<long long> sig;
            sig.reserve(side + 1);
            sig.push_back(half[r * side + s]);
            sig.insert(sig.end(), pairs.begin(), pairs.end());
            out[r * side + s] = intern.id(sig);
          }
      };
      full(hg, ng);
      full(hh, nh);
      joint_classes = intern.size();
    }
    ++rounds;
    bool stable = joint_classes == res.classes_per_round.back();
    res.classes_per_round.push_back(joint_classes);
    cg = std::move(ng);
    ch = std::move(nh);
    if (stable) break;
  }

  res.left = {t, n, cg, rounds, res.classes_per_round.back()};
  res.right = {t, n, ch, rounds, res.classes_per_round.back()};
  res.verdict = detail::multisets_equal(cg, ch) ? Verdict::indistinguishable : Verdict::distinguished;
  return res;
}

/// Joint k-dimensional Weisfeiler-Leman refinement, in the variant for which
/// k-WL indistinguishability coincides with homomorphism indistinguishability
/// over treewidth <= k: k = 0 compares vertex and edge counts, k = 1 is color
/// refinement, k >= 2 is the substitution-tuple (folklore) update.
inline RefinementResult kwl_stable(const Graph& g, const Graph& h, int k, long long tuple_limit = 1 << 17) {
  if (k < 0) throw std::invalid_argument("kwl_stable: k must be >= 0");
  RefinementResult res;
  if (k == 0) {
    res.verdict = (g.vertex_count() == h.vertex_count() && g.edge_count() == h.edge_count())
                      ? Verdict::indistinguishable
                      : Verdict::distinguished;
    res.detail = "0-WL compares vertex and edge counts";
    return res;
  }
  if (g.vertex_count() != h.vertex_count()) {
    res.verdict = Verdict::distinguished;
    res.detail = "vertex counts differ";
    return res;
  }
  int n = g.vertex_count();
  if (n == 0) {
    res.verdict = Verdict::indistinguishable;
    return res;
  }
  long long space = detail::checked_pow(n, k);
  if (space > tuple_limit)
    throw size_limit_error("kwl_stable: refusing tuple space " + std::to_string(space));

  std::vector<int> cg(space), ch(space);
  {
    detail::Interner intern;
    if (k == 1) {
      std::vector<long long> sig{0};
      for (int v = 0; v < n; ++v) cg[v] = intern.id(sig);
      for (int v = 0; v < n; ++v) ch[v] = intern.id(sig);
    } else {
      std::vector<int> w(k);
      auto init = [&](const Graph& gr, std::vector<int>& col) {
        for (long long idx = 0; idx < space; ++idx) {
          long long c = idx;
          for (int i = k - 1; i >= 0; --i) {
            w[i] = static_cast<int>(c % n);
            c /= n;
          }
          auto rt = rel_type(gr, w).encode();
          std::vector<long long> sig(rt.begin(), rt.end());
          col[idx] = intern.id(sig);
        }
      };
      init(g, cg);
      init(h, ch);
    }
    res.classes_per_round.push_back(intern.size());
  }

  // strides for substituting position i
  std::vector<long long> stride(k, 1);
  for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * n;

  int rounds = 0;
  for (;;) {
    std::vector<int> ng(space), nh(space);
    int joint_classes;
    {
      detail::Interner intern;
      long long palette = space * 2 + 1;
      auto step = [&](const Graph& gr, const std::vector<int>& col, std::vector<int>& out) {
        if (k == 1) {
          for (int v = 0; v < n; ++v) {
            std::vector<long long> nb;
            for (int u : gr.neighbors(v)) nb.push_back(col[u]);
            std::sort(nb.begin(), nb.end());
            std::vector<long long> sig{col[v]};
            sig.insert(sig.end(), nb.begin(), nb.end());
            out[v] = intern.id(sig);
          }
          return;
        }
        std::vector<int> w(k);
        std::vector<long long> subs(n);
        for (long long idx = 0; idx < space; ++idx) {
          long long c = idx;
          for (int i = k - 1; i >= 0; --i) {
            w[i] = static_cast<int>(c % n);
            c /= n;
          }
          for (int x = 0; x < n; ++x) {
            long long mixed = 0;
            for (int i = 0; i < k; ++i) {
              long long sub = idx + (x - w[i]) * stride[i];
              mixed = mixed * palette + col[sub];
            }
            subs[x] = mixed;
          }
          std::sort(subs.begin(), subs.end());
          std::vector<long long> sig;
          sig.reserve(n + 1);
          sig.push_back(col[idx]);
          sig.insert(sig.end(), subs.begin(), subs.end());
          out[idx] = intern.id(sig);
        }
      };
      step(g, cg, ng);
      step(h, ch, nh);
      joint_classes = intern.size();
    }
    ++rounds;
    bool stable = joint_classes == res.classes_per_round.back();
    res.classes_per_round.push_back(joint_classes);
    cg = std::move(ng);
    ch = std::move(nh);
    if (stable) break;
  }

  res.left = {k, n, cg, rounds, res.classes_per_round.back()};
  res.right = {k, n, ch, rounds, res.classes_per_round.back()};
  res.verdict = detail::multisets_equal(cg, ch) ? Verdict::indistinguishable : Verdict::distinguished;
  return res;
}

// ---------------------------------------------------------------------------
// Implication ladder

struct LadderRung {
  std::string name;
  bool refused = false;
  std::string refusal;
  Verdict verdict = Verdict::distinguished;
  int rounds = 0;
  std::vector<int> classes_per_round;
};

/// Verdicts for SA_{3t} (= (3t-1)-WL), mwl-t, and SA_t (= (t-1)-WL), plus a
/// check of the implication chain between them. A chain violation falsifies
/// the implementation, not the theory.
struct LadderReport {
  static constexpr const char* variant =
      "k-WL: k=0 counts, k=1 color refinement, k>=2 substitution-tuple (matches hom-indistinguishability over treewidth <= k)";
  int t = 1;
  LadderRung sa_high;  // (3t-1)-WL
  LadderRung mwl;      // t-dimensional mwl
  LadderRung sa_low;   // (t-1)-WL
  bool chain_violation = false;
  std::string violation_detail;
};

inline LadderReport ladder_report(const Graph& g, const Graph& h, int t,
                                  long long mwl_tuple_limit = 1 << 16, long long kwl_tuple_limit = 1 << 17) {
  if (t < 1) throw std::invalid_argument("ladder_report: t must be >= 1");
  LadderReport rep;
  rep.t = t;
  auto run_kwl = [&](int k, LadderRung& rung, const std::string& name) {
    rung.name = name;
    try {
      auto r = kwl_stable(g, h, k, kwl_tuple_limit);
      rung.verdict = r.verdict;
      rung.rounds = r.left.rounds;
      rung.classes_per_round = r.classes_per_round;
    } catch (const size_limit_error& e) {
      rung.refused = true;
      rung.refusal = e.what();
    }
  };
  run_kwl(3 * t - 1, rep.sa_high, "SA_" + std::to_string(3 * t) + " ((" + std::to_string(3 * t - 1) + ")-WL)");
  rep.mwl.name = "mwl-" + std::to_string(t);
  try {
    auto r = mwl_stable(g, h, t, mwl_tuple_limit);
    rep.mwl.verdict = r.verdict;
    rep.mwl.rounds = r.left.rounds;
    rep.mwl.classes_per_round = r.classes_per_round;
  } catch (const size_limit_error& e) {
    rep.mwl.refused = true;
    rep.mwl.refusal = e.what();
  }
  run_kwl(t - 1, rep.sa_low, "SA_" + std::to_string(t) + " ((" + std::to_string(t - 1) + ")-WL)");

  if (!rep.sa_high.refused && !rep.mwl.refused && rep.sa_high.verdict == Verdict::indistinguishable &&
      rep.mwl.verdict == Verdict::distinguished) {
    rep.chain_violation = true;
    rep.violation_detail = "SA_{3t}-indistinguishable but mwl-t distinguished";
  }
  if (!rep.mwl.refused && !rep.sa_low.refused && rep.mwl.verdict == Verdict::indistinguishable &&
      rep.sa_low.verdict == Verdict::distinguished) {
    rep.chain_violation = true;
    rep.violation_detail = "mwl-t-indistinguishable but SA_t distinguished";
  }
  return rep;
}

}  // namespace homdist
