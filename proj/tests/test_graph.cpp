#include "netkit/graph.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace netkit;
using namespace netkit::testutil;

namespace {
MultiGraph make_graph(int n, std::vector<std::pair<int, int>> edges) {
  MultiGraph g;
  g.n = n;
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

// the four-node bridge graph (tetrahedron net):
// ids 0..5 = alpha(1,3), beta(2,3), gamma(1,4), delta(2,4), sigma(1,2), tau(3,4)
MultiGraph bridge_graph() {
  return make_graph(4, {{1, 3}, {2, 3}, {1, 4}, {2, 4}, {1, 2}, {3, 4}});
}

int tree_count_via_laplacian(const MultiGraph& g) {
  auto gm = incidence<Rat>(g);
  auto lap = gm * gm.transpose();
  Rat c = cofactor1(lap, 1, 1);
  return static_cast<int>(numerator(c));
}
}  // namespace

TEST_CASE("incidence matrix") {
  auto g = make_graph(2, {{2, 1}});  // single edge directed into node 2
  auto m = incidence<Rat>(g);
  CHECK(m(0, 0) == Rat(-1));
  CHECK(m(1, 0) == Rat(1));

  auto tri = make_graph(3, {{1, 2}, {2, 3}, {3, 1}});
  auto mt = incidence<Rat>(tri);
  for (int c = 0; c < 3; ++c) {
    Rat s(0);
    for (int r = 0; r < 3; ++r) s += mt(r, c);
    CHECK(s == Rat(0));
  }

  auto empty = MultiGraph{2, {}};
  auto me = incidence<Rat>(empty);
  CHECK(me.rows() == 2);
  CHECK(me.cols() == 0);

  CHECK_THROWS(make_graph(2, {{1, 1}}));
}

TEST_CASE("connectivity") {
  CHECK_FALSE(is_connected(make_graph(4, {{1, 2}, {3, 4}})));
  CHECK(is_connected(make_graph(4, {{1, 2}, {2, 3}, {3, 4}})));
  // the bridge graph stays connected without its two diagonal branches
  auto g = bridge_graph();
  std::set<int> ignore{4, 5};
  CHECK(is_connected(g, &ignore));
  CHECK(component_count(make_graph(5, {{1, 2}})) == 4);
}

TEST_CASE("spanning tree enumeration") {
  auto path = make_graph(3, {{1, 2}, {2, 3}});
  auto trees = spanning_trees(path);
  REQUIRE(trees.size() == 1);
  CHECK(trees[0] == std::vector<int>{0, 1});

  CHECK(spanning_trees(make_graph(3, {{1, 2}, {2, 3}, {3, 1}})).size() == 3);
  CHECK(spanning_trees(bridge_graph()).size() == 16);
  CHECK(spanning_trees(make_graph(4, {{1, 2}, {3, 4}})).empty());
  CHECK(spanning_trees(MultiGraph{1, {}}).size() == 1);

  MultiGraph big;
  big.n = 2;
  for (int i = 0; i < 25; ++i) big.add_edge(1, 2);
  CHECK_THROWS_AS(spanning_trees(big), TooLarge);
}

TEST_CASE("matrix-tree cross-check on random graphs") {
  std::mt19937 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 5;
    auto g = make_graph(n, rand_connected_edges(gen, n, n + trial % 4));
    CHECK(static_cast<int>(spanning_trees(g).size()) == tree_count_via_laplacian(g));
  }
}

TEST_CASE("incidence rank equals n minus components") {
  std::mt19937 gen(22);
  auto g = make_graph(6, {{1, 2}, {2, 3}, {4, 5}});
  CHECK(rank(incidence<Rat>(g)) == 6 - component_count(g));
  auto h = make_graph(4, rand_connected_edges(gen, 4, 6));
  CHECK(rank(incidence<Rat>(h)) == 3);
}

TEST_CASE("deletion and contraction") {
  auto two = make_graph(2, {{1, 2}});
  auto c = contract_nodes(two, 1, 2);
  CHECK(c.n == 1);
  CHECK(c.edges.empty());

  // contracting the detector pair of the bridge removes the tau branch
  auto g = bridge_graph();
  auto [h, ids] = contract_nodes_mapped(g, 3, 4);
  CHECK(h.n == 3);
  CHECK(h.edges.size() == 5);
  CHECK(std::find(ids.begin(), ids.end(), 5) == ids.end());

  CHECK_THROWS(delete_edge(g, 99));
  CHECK_THROWS(contract_nodes(g, 2, 2));

  // deletion and contraction on distinct pairs commute (up to isomorphism:
  // compare node/edge counts and tree counts)
  auto a = contract_nodes(delete_edge(g, 1), 1, 4);
  auto b = delete_edge(contract_nodes(g, 1, 4), 1);
  CHECK(a.n == b.n);
  CHECK(a.edges.size() == b.edges.size());
  CHECK(spanning_trees(a).size() == spanning_trees(b).size());
}

TEST_CASE("deletion-contraction tree counts") {
  std::mt19937 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + trial % 4;
    auto g = make_graph(n, rand_connected_edges(gen, n, n + 2));
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      auto del = spanning_trees(delete_edge(g, e)).size();
      auto con = spanning_trees(contract_nodes(g, g.edges[e].head, g.edges[e].tail)).size();
      CHECK(spanning_trees(g).size() == del + con);
    }
  }
}

TEST_CASE("tree pairs") {
  auto single = make_graph(2, {{1, 2}});
  auto pairs = tree_pairs(single, 1, 2);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first.empty());
  CHECK(pairs[0].second.empty());

  auto path = make_graph(3, {{1, 2}, {2, 3}});
  auto p13 = tree_pairs(path, 1, 3);
  REQUIRE(p13.size() == 2);
  CHECK(p13[0] == std::make_pair(std::vector<int>{0}, std::vector<int>{}));
  CHECK(p13[1] == std::make_pair(std::vector<int>{}, std::vector<int>{1}));

  std::mt19937 gen(24);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + trial % 4;
    auto g = make_graph(n, rand_connected_edges(gen, n, n + 2));
    std::uniform_int_distribution<int> node(1, n);
    int j = node(gen), k = node(gen);
    if (j == k) continue;
    auto tp = tree_pairs(g, j, k);
    CHECK(tp.size() == spanning_trees(contract_nodes(g, j, k)).size());
    for (const auto& [tj, tk] : tp) {
      CHECK(tj.size() + tk.size() == static_cast<size_t>(n - 2));
      // disjoint and j/k on opposite sides
      detail::UnionFind uf(g.n);
      for (int e : tj) uf.unite(g.edges[e].head, g.edges[e].tail);
      for (int e : tk) uf.unite(g.edges[e].head, g.edges[e].tail);
      CHECK(uf.find(j) != uf.find(k));
      for (int e : tj) CHECK(uf.find(g.edges[e].head) == uf.find(j));
      for (int e : tk) CHECK(uf.find(g.edges[e].head) == uf.find(k));
    }
  }
}
