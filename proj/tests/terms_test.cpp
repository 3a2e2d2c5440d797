#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "brainergm/error.hpp"
#include "brainergm/terms.hpp"
#include "test_support.hpp"

using namespace brainergm;
using namespace brainergm::testing;

namespace {

// Reference statistic straight from the definitions, with no shared code.
double reference_stat(const Graph& g, const TermSpec& t, const std::vector<int>& codes) {
  const int n = g.num_nodes();
  const auto a = adjacency(g);
  auto gw = [&](int s) { return std::exp(t.tau) * (1.0 - std::pow(1.0 - std::exp(-t.tau), s)); };
  double v = 0.0;
  switch (t.kind) {
    case TermKind::Edges:
      return static_cast<double>(g.num_edges());
    case TermKind::TwoPath:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = y + 1; z < n; ++z)
            if (x != y && x != z && a[x][y] && a[x][z]) v += 1;
      return v;
    case TermKind::KDegree:
      for (int x = 0; x < n; ++x) v += std::accumulate(a[x].begin(), a[x].end(), 0) == t.k;
      return v;
    case TermKind::GWD:
      for (int x = 0; x < n; ++x) v += gw(std::accumulate(a[x].begin(), a[x].end(), 0));
      return v;
    case TermKind::GWESP:
    case TermKind::GWNSP:
    case TermKind::GWDSP:
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
          const bool include = t.kind == TermKind::GWDSP || (t.kind == TermKind::GWESP) == (a[x][y] == 1);
          if (include) v += gw(brute_shared_partners(a, x, y));
        }
      return v;
    case TermKind::Nodematch:
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) v += a[x][y] && codes[x] == codes[y];
      return v;
  }
  return v;
}

ModelSpec all_terms() {
  return ModelSpec({TermSpec::edges(), TermSpec::two_path(), TermSpec::k_degree(2), TermSpec::gwd(0.75),
                    TermSpec::gwesp(0.75), TermSpec::gwnsp(0.75), TermSpec::gwdsp(0.75), TermSpec::gwesp(0.3),
                    TermSpec::nodematch("lobe")});
}

NodeAttributes random_attributes(int n, Rng& rng) {
  NodeAttributes attrs{"lobe", {}};
  for (int i = 0; i < n; ++i) attrs.labels.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
  return attrs;
}

}  // namespace

TEST(EvalStats, MatchesDefinitionsOnRandomGraphs) {
  Rng rng(1);
  const auto model = all_terms();
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const Graph g = random_graph(n, rng.uniform(), rng);
    const auto attrs = random_attributes(n, rng);
    const auto stats = eval_stats(g, model, &attrs);
    for (std::size_t t = 0; t < model.size(); ++t) {
      EXPECT_NEAR(stats[t], reference_stat(g, model[t], attrs.codes()), 1e-9) << model[t].label();
    }
  }
}

TEST(EvalStats, HandExamples) {
  const ModelSpec gwesp({TermSpec::gwesp(0.75)});
  EXPECT_NEAR(eval_stats(complete_graph(3), gwesp)[0], 3.0, 1e-12);

  const double tau = 0.75;
  const double r = 1.0 - std::exp(-tau);
  const double expected = std::exp(tau) * (3.0 * (1.0 - r) + (1.0 - r * r * r));
  const ModelSpec gwd({TermSpec::gwd(tau)});
  EXPECT_NEAR(eval_stats(star_graph(4), gwd)[0], expected, 1e-12);
  EXPECT_NEAR(expected, 4.806, 5e-4);

  const auto model = all_terms();
  NodeAttributes attrs{"lobe", {"a", "a", "b", "b", "c"}};
  EXPECT_TRUE(eval_stats(Graph(5), model, &attrs).isZero());
}

TEST(EvalStats, NodematchNeedsAttributes) {
  const ModelSpec model({TermSpec::edges(), TermSpec::nodematch()});
  EXPECT_THROW(eval_stats(Graph(3), model), ConfigError);
  NodeAttributes wrong{"hemisphere", {"l", "r", "l"}};
  EXPECT_THROW(eval_stats(Graph(3), ModelSpec({TermSpec::nodematch("lobe")}), &wrong), ConfigError);
}

TEST(ModelSpec, Validation) {
  EXPECT_THROW(ModelSpec(std::vector<TermSpec>{}), ConfigError);
  EXPECT_THROW(ModelSpec({TermSpec::edges(), TermSpec::edges()}), ConfigError);
  EXPECT_THROW(ModelSpec({TermSpec::gwesp(0.0)}), ConfigError);
  EXPECT_NO_THROW(ModelSpec({TermSpec::gwesp(0.75), TermSpec::gwesp(0.5)}));
  EXPECT_EQ(ModelSpec::group_default().label(), "edges + gwesp(0.75) + gwnsp(0.75)");
}

TEST(ChangeStats, HandExamples) {
  const ModelSpec edges({TermSpec::edges()});
  EXPECT_DOUBLE_EQ(change_stats(Graph(4), edges, 1, 3)[0], 1.0);
  const ModelSpec gwesp({TermSpec::gwesp(0.75)});
  EXPECT_NEAR(change_stats(path_graph(3), gwesp, 0, 2)[0], 3.0, 1e-12);
}

// Toggle consistency against full re-evaluation, both for the stateless
// change_stats and for the cached tracker driven through random toggles.
TEST(ChangeStats, EqualEvalDifferenceOnRandomGraphs) {
  Rng rng(2024);
  const auto model = all_terms();
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const Graph g = random_graph(n, rng.uniform(), rng);
    const auto attrs = random_attributes(n, rng);
    const int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n - 1));
    if (j >= i) ++j;
    Graph with = g, without = g;
    if (!with.has_edge(i, j)) with.add_edge(i, j);
    if (without.has_edge(i, j)) without.remove_edge(i, j);
    const StatVector expected = eval_stats(with, model, &attrs) - eval_stats(without, model, &attrs);
    const StatVector got = change_stats(g, model, i, j, &attrs);
    EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-9);

    // Antisymmetry: the signed change of adding equals minus that of removing.
    const StatVector from_with = change_stats(with, model, i, j, &attrs);
    EXPECT_LT((from_with - got).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ChangeStatTracker, StaysConsistentThroughRandomToggles) {
  Rng rng(7);
  const auto model = all_terms();
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));
    const auto attrs = random_attributes(n, rng);
    ChangeStatTracker tracker(model, random_graph(n, 0.3, rng), &attrs);
    StatVector delta;
    for (int step = 0; step < 300; ++step) {
      const int i = static_cast<int>(rng.below(n));
      int j = static_cast<int>(rng.below(n - 1));
      if (j >= i) ++j;
      tracker.change(i, j, delta);
      const StatVector oracle = change_stats(tracker.graph(), model, i, j, &attrs);
      ASSERT_LT((delta - oracle).cwiseAbs().maxCoeff(), 1e-9);
      tracker.toggle(i, j, delta);
    }
    const StatVector full = eval_stats(tracker.graph(), model, &attrs);
    EXPECT_LT((tracker.stats() - full).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(EvalStats, EspPlusNspEqualsDsp) {
  Rng rng(55);
  for (double tau : {0.1, 0.75, 2.0}) {
    const ModelSpec model({TermSpec::gwesp(tau), TermSpec::gwnsp(tau), TermSpec::gwdsp(tau)});
    for (int trial = 0; trial < 50; ++trial) {
      const Graph g = random_graph(3 + static_cast<int>(rng.below(10)), rng.uniform(), rng);
      const auto s = eval_stats(g, model);
      EXPECT_NEAR(s[0] + s[1], s[2], 1e-9);
    }
  }
}

TEST(EvalStats, InvariantUnderNodeRelabeling) {
  Rng rng(31);
  const ModelSpec model({TermSpec::edges(), TermSpec::two_path(), TermSpec::k_degree(3), TermSpec::gwd(),
                         TermSpec::gwesp(), TermSpec::gwnsp(), TermSpec::gwdsp()});
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));
    const Graph g = random_graph(n, rng.uniform(), rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
    Graph h(n);
    for (const Edge& e : g.edges()) h.add_edge(perm[e.u], perm[e.v]);
    EXPECT_LT((eval_stats(g, model) - eval_stats(h, model)).cwiseAbs().maxCoeff(), 1e-9);
  }
}
