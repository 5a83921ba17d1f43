#include "homdist/families.hpp"
#include "homdist/graph.hpp"
#include "homdist/homtensor.hpp"
#include "homdist/refinement.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace homdist;

namespace {

Graph two_triangles() { return disjoint_union(cycle_graph(3), cycle_graph(3)); }

std::vector<int> random_permutation(int k, Rng& rng) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  for (int i = k - 1; i > 0; --i) std::swap(p[i], p[rng.uniform(0, i)]);
  return p;
}

}  // namespace

TEST_CASE("mwl on isomorphic pairs") {
  Rng rng(81);
  for (int round = 0; round < 10; ++round) {
    int n = rng.uniform(1, 6);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = relabel(g, random_permutation(n, rng));
    CHECK(mwl_stable(g, h, 1).verdict == Verdict::indistinguishable);
    if (n <= 5) CHECK(mwl_stable(g, h, 2).verdict == Verdict::indistinguishable);
  }
}

TEST_CASE("mwl distinguishes C6 from two triangles at t=1") {
  auto r = mwl_stable(cycle_graph(6), two_triangles(), 1);
  CHECK(r.verdict == Verdict::distinguished);
}

TEST_CASE("mwl short-circuits on different vertex counts") {
  auto r = mwl_stable(complete_graph(3), complete_graph(4), 1);
  CHECK(r.verdict == Verdict::distinguished);
  CHECK_FALSE(r.detail.empty());
  CHECK_THROWS_AS(mwl_stable(complete_graph(12), complete_graph(12), 2, 1000), size_limit_error);
}

TEST_CASE("mwl partition monotonicity and round bound") {
  Rng rng(82);
  for (int round = 0; round < 10; ++round) {
    int n = rng.uniform(2, 6);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = random_graph(n, 1, 2, rng);
    auto r = mwl_stable(g, h, 1);
    for (std::size_t i = 1; i < r.classes_per_round.size(); ++i)
      CHECK(r.classes_per_round[i] >= r.classes_per_round[i - 1]);
    CHECK(r.left.rounds <= n * n);  // fixpoint within n^{2t} rounds
  }
}

TEST_CASE("mwl sigma consistency at the fixpoint") {
  Rng rng(83);
  auto sigmas1 = homdist::detail::all_permutations(2);
  for (int round = 0; round < 8; ++round) {
    int n = rng.uniform(2, 5);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = random_graph(n, 1, 2, rng);
    auto r = mwl_stable(g, h, 1);
    if (r.left.color.empty()) continue;
    // color(rs) determines color(sigma(rs)) jointly over both graphs
    std::map<int, std::map<std::size_t, int>> orbit;
    auto scan = [&](const Coloring& c) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          int idx = a * n + b;
          for (std::size_t s = 0; s < sigmas1.size(); ++s) {
            std::vector<int> w{a, b};
            std::vector<int> pw(2);
            for (int i = 0; i < 2; ++i) pw[i] = w[sigmas1[s][i]];
            int pidx = pw[0] * n + pw[1];
            auto [it, fresh] = orbit[c.color[idx]].try_emplace(s, c.color[pidx]);
            if (!fresh) CHECK(it->second == c.color[pidx]);
          }
        }
    };
    scan(r.left);
    scan(r.right);
  }
}

TEST_CASE("mwl is invariant under relabeling") {
  Rng rng(84);
  for (int round = 0; round < 8; ++round) {
    int n = rng.uniform(2, 6);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = random_graph(n, 1, 2, rng);
    Graph g2 = relabel(g, random_permutation(n, rng));
    auto r1 = mwl_stable(g, h, 1);
    auto r2 = mwl_stable(g2, h, 1);
    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.classes_per_round == r2.classes_per_round);
  }
}

TEST_CASE("kwl basics") {
  // 0-WL compares counts only
  CHECK(kwl_stable(cycle_graph(6), two_triangles(), 0).verdict == Verdict::indistinguishable);
  CHECK(kwl_stable(cycle_graph(6), cycle_graph(5), 0).verdict == Verdict::distinguished);

  // both 2-regular: color refinement cannot separate
  CHECK(kwl_stable(cycle_graph(6), two_triangles(), 1).verdict == Verdict::indistinguishable);
  // 2-WL sees triangles
  CHECK(kwl_stable(cycle_graph(6), two_triangles(), 2).verdict == Verdict::distinguished);

  Rng rng(85);
  for (int round = 0; round < 6; ++round) {
    int n = rng.uniform(1, 6);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = relabel(g, random_permutation(n, rng));
    for (int k = 0; k <= 3; ++k) CHECK(kwl_stable(g, h, k).verdict == Verdict::indistinguishable);
  }
}

TEST_CASE("1-WL agrees with degree refinement on regular vs irregular") {
  CHECK(kwl_stable(path_graph(4), cycle_graph(4), 1).verdict == Verdict::distinguished);
  CHECK(kwl_stable(cycle_graph(4), complete_bipartite(2, 2), 1).verdict == Verdict::indistinguishable);
}

TEST_CASE("mwl-1 equals 2-WL on all pairs of 5-vertex graphs with equal degree sequence") {
  // both decide homomorphism indistinguishability over treewidth <= 2
  auto graphs = oracles::all_graphs(5);
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = i + 1; j < graphs.size(); ++j) {
      if (graphs[i].degree_sequence() != graphs[j].degree_sequence()) continue;
      auto m = mwl_stable(graphs[i], graphs[j], 1).verdict;
      auto w = kwl_stable(graphs[i], graphs[j], 2).verdict;
      CHECK(m == w);
    }
}

TEST_CASE("ladder report") {
  auto iso = ladder_report(cycle_graph(5), relabel(cycle_graph(5), {2, 3, 4, 0, 1}), 1);
  CHECK_FALSE(iso.chain_violation);
  CHECK(iso.sa_high.verdict == Verdict::indistinguishable);
  CHECK(iso.mwl.verdict == Verdict::indistinguishable);
  CHECK(iso.sa_low.verdict == Verdict::indistinguishable);

  auto rep = ladder_report(cycle_graph(6), two_triangles(), 1);
  CHECK_FALSE(rep.chain_violation);
  CHECK(rep.sa_high.verdict == Verdict::distinguished);  // 2-WL
  CHECK(rep.mwl.verdict == Verdict::distinguished);
  CHECK(rep.sa_low.verdict == Verdict::indistinguishable);  // 0-WL

  // size refusals produce a partial report
  auto big = ladder_report(complete_graph(13), complete_graph(13), 2, 1 << 10, 1 << 10);
  CHECK(big.mwl.refused);
  CHECK_FALSE(big.sa_low.refused);
}

TEST_CASE("soundness against homomorphism counts over enumerated members") {
  EnumerationBudget b;
  b.max_vertices = 5;
  b.max_depth = 4;
  auto members = enumerate_family(1, Family::LPlus, b);
  // dedupe underlying graphs
  std::map<std::string, Graph> underlying;
  for (auto& m : members) {
    Graph u = simple_reduct(unlabel(m.graph));
    underlying.emplace(canonical_key(u), u);
  }
  Rng rng(86);
  int indist = 0, dist = 0;
  for (int round = 0; round < 30; ++round) {
    int n = rng.uniform(2, 6);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = rng.chance(1, 2) ? relabel(g, random_permutation(n, rng)) : random_graph(n, 1, 2, rng);
    bool mwl_ok = mwl_stable(g, h, 1).verdict == Verdict::indistinguishable;
    bool hom_ok = true;
    for (auto& [key, f] : underlying)
      if (hom_count(f, g) != hom_count(f, h)) {
        hom_ok = false;
        break;
      }
    // Indistinguishable implies equal counts over every member; a differing
    // member forces a distinguishing run.
    if (mwl_ok) {
      CHECK(hom_ok);
      ++indist;
    }
    if (!hom_ok) {
      CHECK_FALSE(mwl_ok);
      ++dist;
    }
  }
  CHECK(indist > 0);
  CHECK(dist > 0);
}

TEST_CASE("tuple-level consistency: equal stable colors give equal tensor entries") {
  EnumerationBudget b;
  b.max_vertices = 4;
  b.max_depth = 3;
  auto members = enumerate_family(1, Family::LPlus, b);
  Rng rng(87);
  for (int round = 0; round < 6; ++round) {
    int n = rng.uniform(2, 5);
    Graph g = random_graph(n, 1, 2, rng);
    Graph h = relabel(g, random_permutation(n, rng));
    auto r = mwl_stable(g, h, 1);
    REQUIRE(r.verdict == Verdict::indistinguishable);
    for (auto& m : members) {
      auto tg = hom_tensor(m.graph, g);
      auto th = hom_tensor(m.graph, h);
      std::map<int, Integer> value_of_color;
      auto scan = [&](const Coloring& c, const HomTensor& t) {
        for (int a = 0; a < n; ++a)
          for (int bb = 0; bb < n; ++bb) {
            auto [it, fresh] = value_of_color.try_emplace(c.color[a * n + bb], t.at(a, bb));
            if (!fresh) CHECK(it->second == t.at(a, bb));
          }
      };
      scan(r.left, tg);
      scan(r.right, th);
    }
  }
}
