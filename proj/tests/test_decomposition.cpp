#include "homdist/decomposition.hpp"
#include "homdist/graph.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace homdist;

TEST_CASE("treewidth of standard graphs") {
  auto [w_k4, td_k4] = treewidth_exact(complete_graph(4));
  CHECK(w_k4 == 3);
  CHECK(validate_decomposition(complete_graph(4), td_k4).empty());

  auto [w_c6, td_c6] = treewidth_exact(cycle_graph(6));
  CHECK(w_c6 == 2);
  CHECK(validate_decomposition(cycle_graph(6), td_c6).empty());

  auto [w_e5, td_e5] = treewidth_exact(empty_graph(5));
  CHECK(w_e5 == 0);
  CHECK(validate_decomposition(empty_graph(5), td_e5).empty());

  CHECK(treewidth_value(complete_bipartite(3, 3)) == 3);
  CHECK_THROWS_AS(treewidth_value(Graph(20)), size_limit_error);
}

TEST_CASE("treewidth matches the elimination-ordering brute force") {
  Rng rng(51);
  for (int round = 0; round < 40; ++round) {
    int n = rng.uniform(1, 8);
    Graph g = random_graph(n, rng.uniform(1, 3), 4, rng);
    auto [w, td] = treewidth_exact(g);
    CHECK(w == oracles::brute_force_treewidth(g));
    CHECK(validate_decomposition(g, td).empty());
    CHECK(td.width() == w);
  }
}

TEST_CASE("pathwidth basics") {
  CHECK(pathwidth_exact(path_graph(5)).first == 1);
  CHECK(pathwidth_exact(cycle_graph(5)).first == 2);
  CHECK(pathwidth_exact(complete_graph(4)).first == 3);
  // a star has pathwidth 1
  CHECK(pathwidth_exact(complete_bipartite(1, 4)).first == 1);
  // pathwidth >= treewidth on a sample
  Rng rng(52);
  for (int round = 0; round < 25; ++round) {
    Graph g = random_graph(rng.uniform(1, 8), 1, 3, rng);
    auto [pw, pd] = pathwidth_exact(g);
    CHECK(pw >= treewidth_value(g));
    CHECK(validate_decomposition(g, pd).empty());
    for (int x = 0; x < pd.tree.vertex_count(); ++x) CHECK(pd.tree.degree(x) <= 2);
  }
}

TEST_CASE("validate_decomposition rejects each broken condition") {
  Graph p3 = path_graph(3);
  TreeDecomposition td;
  td.tree = path_graph(2);
  td.bags = {{0, 1}, {1, 2}};
  CHECK(validate_decomposition(p3, td).empty());

  TreeDecomposition missing_vertex{path_graph(1), {{0, 1}}};
  CHECK(validate_decomposition(p3, missing_vertex).find("condition 1") != std::string::npos);

  TreeDecomposition missing_edge{path_graph(2), {{0, 1}, {2}}};
  CHECK(validate_decomposition(p3, missing_edge).find("condition 2") != std::string::npos);

  TreeDecomposition disconnected{path_graph(3), {{0, 1}, {1, 2}, {0}}};
  CHECK(validate_decomposition(p3, disconnected).find("condition 3") != std::string::npos);
}

TEST_CASE("smooth decompositions: small cases") {
  // P_3 at k=1: two bags of size 2 sharing the middle vertex
  auto td = smooth_decomposition(path_graph(3), 1, DecompositionShape::tree);
  CHECK(td.bags.size() == 2);
  for (auto& b : td.bags) CHECK(b.size() == 2);

  // K_4 at k=3: single bag
  auto td2 = smooth_decomposition(complete_graph(4), 3, DecompositionShape::tree);
  CHECK(td2.bags.size() == 1);
  CHECK(td2.bags[0].size() == 4);

  // C_6 at k=2: four bags of size 3 with intersections of size 2
  auto td3 = smooth_decomposition(cycle_graph(6), 2, DecompositionShape::tree);
  CHECK(td3.bags.size() == 4);
  for (auto& b : td3.bags) CHECK(b.size() == 3);

  CHECK_THROWS_AS(smooth_decomposition(complete_graph(4), 2, DecompositionShape::tree), std::invalid_argument);
  CHECK_THROWS_AS(smooth_decomposition(path_graph(2), 2, DecompositionShape::tree), std::invalid_argument);
}

TEST_CASE("smooth decomposition invariants on random graphs") {
  Rng rng(53);
  int done = 0;
  for (int round = 0; round < 60 && done < 30; ++round) {
    int n = rng.uniform(2, 8);
    Graph g = random_graph(n, 1, 3, rng);
    for (auto shape : {DecompositionShape::tree, DecompositionShape::path}) {
      int w = shape == DecompositionShape::tree ? treewidth_value(g) : pathwidth_exact(g).first;
      int k = std::min(n - 1, w + rng.uniform(0, 1));  // sometimes smooth above the width
      if (k < w || n < k + 1) continue;
      auto td = smooth_decomposition(g, k, shape);
      CHECK(validate_decomposition(g, td).empty());
      for (auto& b : td.bags) CHECK(static_cast<int>(b.size()) == k + 1);
      for (auto [s, t] : td.tree.edges()) {
        std::vector<int> inter;
        std::set_intersection(td.bags[s].begin(), td.bags[s].end(), td.bags[t].begin(), td.bags[t].end(),
                              std::back_inserter(inter));
        CHECK(static_cast<int>(inter.size()) == k);
      }
      // a smooth decomposition introduces one vertex per bag beyond the first
      CHECK(td.bags.size() == static_cast<std::size_t>(n - k));
      ++done;
    }
  }
  CHECK(done >= 30);
}
