#pragma once

#include "homdist/graph.hpp"
#include "homdist/isomorphism.hpp"
#include "homdist/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace homdist {

using PairSet = std::vector<std::pair<int, int>>;  // sorted set of (g, h) pairs

/// Partial isomorphism test: equality and adjacency consistent on all pairs.
inline bool is_partial_iso(const Graph& g, const Graph& h, const PairSet& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      auto [g1, h1] = pairs[i];
      auto [g2, h2] = pairs[j];
      if ((g1 == g2) != (h1 == h2)) return false;
      if (g.adjacent(g1, g2) != h.adjacent(h1, h2)) return false;
    }
  return true;
}

/// All partial isomorphisms up to max_size by consistent extension, in
/// generation (lexicographic DFS) order.
inline std::vector<PairSet> enumerate_partial_isos(const Graph& g, const Graph& h, int max_size,
                                                   long long count_limit = 5'000'000) {
  long long universe = static_cast<long long>(g.vertex_count()) * h.vertex_count();
  if (universe > 100)
    throw size_limit_error("enumerate_partial_isos: refusing pair universe " + std::to_string(universe));
  std::vector<std::pair<int, int>> all;
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = 0; b < h.vertex_count(); ++b) all.push_back({a, b});
  std::vector<PairSet> out;
  PairSet current;
  long long budget = count_limit;
  auto rec = [&](auto&& self, std::size_t next) -> void {
    if (--budget < 0) throw size_limit_error("enumerate_partial_isos: too many partial isomorphisms");
    out.push_back(current);
    if (static_cast<int>(current.size()) == max_size) return;
    for (std::size_t i = next; i < all.size(); ++i) {
      auto [g2, h2] = all[i];
      bool ok = true;
      for (auto [g1, h1] : current) {
        if ((g1 == g2) != (h1 == h2) || g.adjacent(g1, g2) != h.adjacent(h1, h2)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      current.push_back(all[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  for (auto& p : out)
    if (!is_partial_iso(g, h, p)) throw std::logic_error("enumerate_partial_isos: generated inconsistent set");
  return out;
}

/// The level-t Lasserre system: variables over partial isomorphisms of size
/// <= 2t (non-partial-isomorphism index sets are eliminated as forced
/// zeros), the moment matrix over size-<= t sets, the two families of
/// marginalization constraints, and y_emptyset = 1.
struct LasserreSystem {
  int t = 1;
  bool nonneg = false;
  Graph g, h;
  std::vector<PairSet> vars;  // sorted by (size, lex); vars[0] is the empty set
  std::map<PairSet, int> index;
  std::vector<int> moment_rows;          // var ids of size <= t, ascending
  std::vector<std::vector<int>> moment;  // var id of the union, or -1 when eliminated

  struct Constraint {
    std::vector<int> terms;  // sum of y over these ids ...
    int rhs = 0;             // ... equals y at this id
    std::string desc;
  };
  std::vector<Constraint> constraints;

  int var_count() const { return static_cast<int>(vars.size()); }
};

inline std::string pairset_to_string(const PairSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += (i ? "," : "") + std::string("(") + std::to_string(s[i].first) + "," + std::to_string(s[i].second) + ")";
  return out + "}";
}

inline LasserreSystem build_system(const Graph& g, const Graph& h, int t, bool nonneg) {
  if (t < 1) throw std::invalid_argument("build_system: t must be >= 1");
  if (g.has_any_loop() || h.has_any_loop()) throw std::invalid_argument("build_system: graphs must be simple");
  LasserreSystem sys;
  sys.t = t;
  sys.nonneg = nonneg;
  sys.g = g;
  sys.h = h;
  sys.vars = enumerate_partial_isos(g, h, 2 * t);
  std::sort(sys.vars.begin(), sys.vars.end(), [](const PairSet& a, const PairSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  for (int i = 0; i < sys.var_count(); ++i) sys.index.emplace(sys.vars[i], i);

  for (int i = 0; i < sys.var_count(); ++i)
    if (static_cast<int>(sys.vars[i].size()) <= t) sys.moment_rows.push_back(i);
  int m = static_cast<int>(sys.moment_rows.size());
  sys.moment.assign(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      PairSet uni;
      std::set_union(sys.vars[sys.moment_rows[i]].begin(), sys.vars[sys.moment_rows[i]].end(),
                     sys.vars[sys.moment_rows[j]].begin(), sys.vars[sys.moment_rows[j]].end(),
                     std::back_inserter(uni));
      auto it = sys.index.find(uni);
      sys.moment[i][j] = it == sys.index.end() ? -1 : it->second;
    }

  for (int i = 0; i < sys.var_count(); ++i) {
    const PairSet& I = sys.vars[i];
    if (static_cast<int>(I.size()) > 2 * t - 2) continue;
    for (int a = 0; a < g.vertex_count(); ++a) {
      LasserreSystem::Constraint con;
      con.rhs = i;
      con.desc = "sum over h of y_{I+(g" + std::to_string(a) + ",h)} = y_I, I=" + pairset_to_string(I);
      for (int b = 0; b < h.vertex_count(); ++b) {
        std::pair<int, int> p{a, b};
        if (std::binary_search(I.begin(), I.end(), p)) {
          con.terms.push_back(i);
          continue;
        }
        PairSet J = I;
        J.insert(std::lower_bound(J.begin(), J.end(), p), p);
        auto it = sys.index.find(J);
        if (it != sys.index.end()) con.terms.push_back(it->second);
      }
      sys.constraints.push_back(std::move(con));
    }
    for (int b = 0; b < h.vertex_count(); ++b) {
      LasserreSystem::Constraint con;
      con.rhs = i;
      con.desc = "sum over g of y_{I+(g,h" + std::to_string(b) + ")} = y_I, I=" + pairset_to_string(I);
      for (int a = 0; a < g.vertex_count(); ++a) {
        std::pair<int, int> p{a, b};
        if (std::binary_search(I.begin(), I.end(), p)) {
          con.terms.push_back(i);
          continue;
        }
        PairSet J = I;
        J.insert(std::lower_bound(J.begin(), J.end(), p), p);
        auto it = sys.index.find(J);
        if (it != sys.index.end()) con.terms.push_back(it->second);
      }
      sys.constraints.push_back(std::move(con));
    }
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Verification

namespace detail {

/// Exact PSD test by symmetric elimination: a zero pivot forces a zero row,
/// a negative pivot is a certificate of indefiniteness.
inline bool psd_exact(std::vector<std::vector<Rational>> a, std::string* why = nullptr) {
  std::size_t m = a.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (a[k][k] < 0) {
      if (why) *why = "negative pivot at row " + std::to_string(k);
      return false;
    }
    if (a[k][k] == 0) {
      for (std::size_t j = k + 1; j < m; ++j)
        if (a[k][j] != 0) {
          if (why) *why = "zero pivot with nonzero off-diagonal at row " + std::to_string(k);
          return false;
        }
      continue;
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      if (a[i][k] == 0) continue;
      Rational factor = a[i][k] / a[k][k];
      for (std::size_t j = k; j < m; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  return true;
}

/// Minimum eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double min_eigenvalue_jacobi(std::vector<std::vector<double>> a) {
  std::size_t m = a.size();
  if (m == 0) return 0.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        if (std::abs(a[p][q]) < 1e-18) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double sgn = theta >= 0 ? 1.0 : -1.0;
        double tv = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(tv * tv + 1), s = tv * c;
        for (std::size_t k = 0; k < m; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  double lo = a[0][0];
  for (std::size_t i = 1; i < m; ++i) lo = std::min(lo, a[i][i]);
  return lo;
}

}  // namespace detail

struct VerifyResult {
  bool accepted = true;
  std::vector<std::string> violations;
};

/// Check a candidate assignment against the system. Linear constraints and
/// the normalization are always checked exactly over the rationals. The PSD
/// condition uses exact elimination when tol = 0 and a Jacobi eigenvalue
/// bound lambda_min >= -tol * max|entry| otherwise.
inline VerifyResult verify_solution(const LasserreSystem& sys, const std::vector<Rational>& y, const Rational& tol) {
  if (static_cast<int>(y.size()) != sys.var_count())
    throw std::invalid_argument("verify_solution: assignment has " + std::to_string(y.size()) + " values, expected " +
                                std::to_string(sys.var_count()) + " (missing variable " +
                                pairset_to_string(sys.vars[std::min<std::size_t>(y.size(), sys.vars.size() - 1)]) + ")");
  if (tol < 0) throw std::invalid_argument("verify_solution: negative tolerance");
  VerifyResult res;
  auto flag = [&](const std::string& s) {
    res.accepted = false;
    res.violations.push_back(s);
  };

  if (y[0] != 1) flag("normalization y_{} = 1 violated (got " + y[0].str() + ")");

  for (const auto& con : sys.constraints) {
    Rational lhs = 0;
    for (int id : con.terms) lhs += y[id];
    if (lhs != y[con.rhs]) flag("linear constraint violated: " + con.desc);
  }

  int m = static_cast<int>(sys.moment_rows.size());
  if (tol == 0) {
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (sys.moment[i][j] >= 0) a[i][j] = y[sys.moment[i][j]];
    std::string why;
    if (!detail::psd_exact(std::move(a), &why)) flag("moment matrix not PSD: " + why);
  } else {
    std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
    double maxabs = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (sys.moment[i][j] >= 0) {
          a[i][j] = static_cast<double>(y[sys.moment[i][j]]);
          maxabs = std::max(maxabs, std::abs(a[i][j]));
        }
    double lo = detail::min_eigenvalue_jacobi(a);
    if (lo < -static_cast<double>(tol) * std::max(maxabs, 1.0))
      flag("moment matrix not PSD: lambda_min = " + std::to_string(lo));
  }

  if (sys.nonneg) {
    for (int i = 0; i < sys.var_count(); ++i)
      if (y[i] < -tol) flag("non-negativity violated at y_" + pairset_to_string(sys.vars[i]) + " = " + y[i].str());
  }
  return res;
}

/// The {0,1} assignment induced by an isomorphism: y_I = 1 iff I sits inside
/// the bijection's graph.
inline std::vector<Rational> integral_solution_from_iso(const LasserreSystem& sys, const std::vector<int>& bijection) {
  if (!is_isomorphism(sys.g, sys.h, bijection))
    throw std::invalid_argument("integral_solution_from_iso: map is not an isomorphism");
  std::vector<Rational> y(sys.var_count(), Rational(0));
  for (int i = 0; i < sys.var_count(); ++i) {
    bool inside = true;
    for (auto [a, b] : sys.vars[i])
      if (bijection[a] != b) {
        inside = false;
        break;
      }
    y[i] = inside ? 1 : 0;
  }
  return y;
}

// ---------------------------------------------------------------------------
// SDPA sparse export and solution import

/// Sparse SDPA (.dat-s) encoding of the system: the moment matrix as one PSD
/// block (y_emptyset substituted to 1), every equality as a pair of
/// inequalities on a diagonal block, and an optional diagonal non-negativity
/// block. Variable order is the system's (size, lex) order minus the empty
/// set; output is byte-stable across runs.
inline std::string export_sdpa(const LasserreSystem& sys) {
  int nvars = sys.var_count() - 1;  // y_{} substituted out
  int m = static_cast<int>(sys.moment_rows.size());
  int ncons = static_cast<int>(sys.constraints.size());
  int nblocks = sys.nonneg ? 3 : 2;

  // entries[matno] -> (block, i, j) -> value; matno 0 is F0
  std::vector<std::map<std::tuple<int, int, int>, long long>> entries(nvars + 1);
  auto add = [&](int matno, int block, int i, int j, long long v) {
    if (v == 0) return;
    auto key = std::make_tuple(block, i, j);
    entries[matno][key] += v;
    if (entries[matno][key] == 0) entries[matno].erase(key);
  };

  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      int u = sys.moment[i][j];
      if (u < 0) continue;
      if (u == 0)
        add(0, 1, i + 1, j + 1, -1);  // constant contribution 1
      else
        add(u, 1, i + 1, j + 1, 1);
    }

  for (int c = 0; c < ncons; ++c) {
    std::map<int, long long> coeff;
    long long constant = 0;
    for (int id : sys.constraints[c].terms) {
      if (id == 0)
        constant += 1;
      else
        coeff[id] += 1;
    }
    if (sys.constraints[c].rhs == 0)
      constant -= 1;
    else
      coeff[sys.constraints[c].rhs] -= 1;
    // sum coeff*x + constant >= 0  and  <= 0
    int p1 = 2 * c + 1, p2 = 2 * c + 2;
    for (auto [id, v] : coeff) {
      add(id, 2, p1, p1, v);
      add(id, 2, p2, p2, -v);
    }
    add(0, 2, p1, p1, -constant);
    add(0, 2, p2, p2, constant);
  }

  if (sys.nonneg)
    for (int id = 1; id <= nvars; ++id) add(id, 3, id, id, 1);

  std::ostringstream out;
  out << nvars << " = mdim\n";
  out << nblocks << " = nblocks\n";
  out << m << " " << -(2 * ncons);
  if (sys.nonneg) out << " " << -nvars;
  out << "\n";
  for (int i = 0; i < nvars; ++i) out << (i ? " " : "") << 0;
  out << "\n";
  for (int matno = 0; matno <= nvars; ++matno)
    for (auto& [key, v] : entries[matno]) {
      auto [block, i, j] = key;
      out << matno << " " << block << " " << i << " " << j << " " << v << "\n";
    }
  return out.str();
}

/// Values in exported variable order (everything except y_emptyset, which is
/// fixed to 1) -> full assignment vector.
inline std::vector<Rational> assignment_from_imported(const LasserreSystem& sys, const std::vector<Rational>& values) {
  if (static_cast<int>(values.size()) != sys.var_count() - 1)
    throw std::invalid_argument("assignment import: expected " + std::to_string(sys.var_count() - 1) + " values, got " +
                                std::to_string(values.size()));
  std::vector<Rational> y;
  y.push_back(1);
  y.insert(y.end(), values.begin(), values.end());
  return y;
}

inline std::vector<Rational> parse_assignment_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<Rational> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_rational(tok));
  return out;
}

}  // namespace homdist
