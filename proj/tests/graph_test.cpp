#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "brainergm/error.hpp"
#include "brainergm/graph.hpp"
#include "brainergm/graph_io.hpp"
#include "test_support.hpp"

using namespace brainergm;
using namespace brainergm::testing;

TEST(Graph, ToggleAddsAndRemoves) {
  Graph g(3);
  g.toggle(0, 1);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_EQ(g.num_edges(), 1u);

  Graph tri = complete_graph(3);
  const Graph path = toggle_edge(tri, 0, 1);
  EXPECT_EQ(path, make_graph(3, {{0, 2}, {1, 2}}));
}

TEST(Graph, ToggleRejectsInvalidDyads) {
  Graph g(3);
  EXPECT_THROW(g.toggle(1, 1), InvalidDyadError);
  EXPECT_THROW(g.toggle(0, 3), InvalidDyadError);
  EXPECT_THROW(g.toggle(-1, 2), InvalidDyadError);
}

TEST(Graph, ToggleIsAnInvolutionChangingEdgeCountByOne) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const Graph g = random_graph(n, rng.uniform(), rng);
    const int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n - 1));
    if (j >= i) ++j;
    Graph h = toggle_edge(g, i, j);
    const long diff = static_cast<long>(h.num_edges()) - static_cast<long>(g.num_edges());
    EXPECT_EQ(std::abs(diff), 1);
    h.toggle(i, j);
    EXPECT_EQ(h, g);
  }
}

TEST(Graph, EqualityIgnoresInsertionOrder) {
  Graph a = make_graph(4, {{0, 1}, {2, 3}, {1, 2}});
  Graph b = make_graph(4, {{1, 2}, {0, 1}, {3, 2}});
  EXPECT_EQ(a, b);
}

TEST(DegreeSequence, Examples) {
  const auto tri = degree_sequence(complete_graph(3));
  EXPECT_EQ(tri.degrees, (std::vector<int>{2, 2, 2}));
  EXPECT_DOUBLE_EQ(tri.mean_degree, 2.0);

  const auto star = degree_sequence(star_graph(4));
  EXPECT_EQ(star.degrees, (std::vector<int>{3, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(star.mean_degree, 1.5);

  // 90 nodes, 225 edges: K = 2|E|/n = 5.
  Graph g(90);
  int placed = 0;
  for (int i = 0; i < 90 && placed < 225; ++i)
    for (int j = i + 1; j < 90 && placed < 225; ++j, ++placed) g.add_edge(i, j);
  EXPECT_DOUBLE_EQ(degree_sequence(g).mean_degree, 5.0);
}

TEST(GiantComponent, Examples) {
  EXPECT_EQ(giant_component_size(make_graph(4, {{0, 1}, {1, 2}, {0, 2}})), 3);
  EXPECT_EQ(giant_component_size(Graph(5)), 1);
  EXPECT_EQ(giant_component_size(make_graph(5, {{0, 1}, {1, 2}, {3, 4}})), 3);
}

TEST(GiantComponent, MatchesFloodFillFromEveryNode) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const Graph g = random_graph(n, 0.15, rng);
    const auto d = floyd_warshall(g);
    int best = 0;
    for (int s = 0; s < n; ++s) {
      int reach = 0;
      for (int t = 0; t < n; ++t) reach += d[s][t] < kInf ? 1 : 0;
      best = std::max(best, reach);
    }
    EXPECT_EQ(giant_component_size(g), best);
  }
}

TEST(SharedPartners, TriangleAndEdgeless) {
  const auto tri = shared_partner_distributions(complete_graph(3));
  EXPECT_EQ(tri.esp, (std::vector<std::int64_t>{0, 3}));
  EXPECT_EQ(tri.nsp, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(tri.dsp, tri.esp);

  const auto empty = shared_partner_distributions(Graph(3));
  EXPECT_EQ(empty.esp, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(empty.nsp, (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(empty.dsp, (std::vector<std::int64_t>{3, 0}));
}

TEST(SharedPartners, RandomGraphInvariants) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const Graph g = random_graph(n, rng.uniform(), rng);
    const auto deg = degree_sequence(g).degrees;
    EXPECT_EQ(std::accumulate(deg.begin(), deg.end(), 0L), 2L * static_cast<long>(g.num_edges()));

    const auto sp = shared_partner_distributions(g);
    ASSERT_EQ(sp.esp.size(), static_cast<std::size_t>(n - 1));
    const auto a = adjacency(g);
    std::vector<std::int64_t> esp(n - 1, 0), nsp(n - 1, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) (a[i][j] ? esp : nsp)[brute_shared_partners(a, i, j)]++;
    EXPECT_EQ(sp.esp, esp);
    EXPECT_EQ(sp.nsp, nsp);
    for (int s = 0; s < n - 1; ++s) EXPECT_EQ(sp.dsp[s], sp.esp[s] + sp.nsp[s]);
    EXPECT_EQ(std::accumulate(sp.esp.begin(), sp.esp.end(), 0L), static_cast<long>(g.num_edges()));
  }
}

TEST(GraphIo, LoadsPathGraph) {
  std::istringstream in("n=3\n0 1\n1 2\n");
  EXPECT_EQ(load_graph(in), path_graph(3));
}

TEST(GraphIo, CommentsAndOneBasedIds) {
  std::istringstream in("# header comment\nn=3 base=1\n1 2  # trailing\n\n2 3\n");
  EXPECT_EQ(load_graph(in), path_graph(3));
}

TEST(GraphIo, RoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(1 + static_cast<int>(rng.below(15)), 0.3, rng);
    std::stringstream buf;
    save_graph(g, buf);
    EXPECT_EQ(load_graph(buf), g);
  }
}

TEST(GraphIo, ErrorsCarryLineNumbers) {
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      load_graph(in);
      FAIL() << "expected ParseError for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_line("n=3\n2 2\n", 2);          // self-loop
  expect_line("n=3\n0 1\n1 0\n", 3);     // duplicate
  expect_line("n=3\n0 3\n", 2);          // id >= n
  expect_line("n=3\n0 1 2\n", 2);        // malformed
  expect_line("0 1\n", 1);               // missing header
}

TEST(Attributes, LoadAndCodes) {
  std::istringstream in("node_id,lobe\n0,frontal\n2,temporal\n1,frontal\n");
  const auto attrs = load_attributes(in, 3);
  EXPECT_EQ(attrs.name, "lobe");
  EXPECT_EQ(attrs.codes(), (std::vector<int>{0, 0, 1}));
  std::istringstream missing("node_id,lobe\n0,a\n");
  EXPECT_THROW(load_attributes(missing, 2), ParseError);
}

TEST(Graphical, ErdosGallaiAndHavelHakimi) {
  EXPECT_TRUE(is_graphical(std::vector<int>{2, 2, 2, 2}));
  EXPECT_TRUE(is_graphical(std::vector<int>{3, 1, 1, 1}));
  EXPECT_FALSE(is_graphical(std::vector<int>{3, 3, 1, 1}));
  EXPECT_FALSE(is_graphical(std::vector<int>{1, 1, 1}));
  EXPECT_FALSE(is_graphical(std::vector<int>{4, 1, 1, 1}));

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_graph(2 + static_cast<int>(rng.below(15)), rng.uniform(), rng);
    const auto deg = degree_sequence(g).degrees;
    ASSERT_TRUE(is_graphical(deg));
    EXPECT_EQ(degree_sequence(havel_hakimi(deg)).degrees, deg);
  }
  EXPECT_THROW(havel_hakimi(std::vector<int>{3, 3, 1, 1}), SamplerError);
}
