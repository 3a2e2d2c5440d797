#include <gtest/gtest.h>

#include <cmath>

#include "brainergm/error.hpp"
#include "brainergm/estimator.hpp"
#include "brainergm/sampler.hpp"
#include "test_support.hpp"

using namespace brainergm;
using namespace brainergm::testing;

namespace {

double logit_density(const Graph& g) {
  const double d = static_cast<double>(g.num_edges()) / static_cast<double>(g.num_dyads());
  return std::log(d / (1.0 - d));
}

Graph graph_with_edges(int n, int m) {
  Graph g(n);
  int placed = 0;
  for (int i = 0; i < n && placed < m; ++i)
    for (int j = i + 1; j < n && placed < m; ++j, ++placed) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST(EstimationMethod, StringRoundTrip) {
  for (auto m : {EstimationMethod::Mple, EstimationMethod::McmcMle, EstimationMethod::Exact}) {
    EXPECT_EQ(estimation_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(estimation_method_from_string("bayes"), ConfigError);
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig cfg;
  cfg.sample_size = 99;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.method = EstimationMethod::Mple;
  EXPECT_NO_THROW(cfg.validate());
  cfg.exact_limit = 8;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Mple, EdgesOnlyIsLogitDensity) {
  const ModelSpec edges({TermSpec::edges()});
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(4 + static_cast<int>(rng.below(20)), 0.1 + 0.8 * rng.uniform(), rng);
    if (g.num_edges() == 0 || g.num_edges() == g.num_dyads()) continue;
    const auto fit = mple(g, edges);
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.theta[0], logit_density(g), 1e-6);
  }
  const auto fit = mple(graph_with_edges(90, 225), edges);
  EXPECT_NEAR(fit.theta[0], std::log(225.0 / 3780.0), 1e-6);
  EXPECT_NEAR(fit.theta[0], -2.8214, 1e-4);
}

TEST(Mple, EmptyGraphIsFlaggedAsSeparation) {
  const auto fit = mple(Graph(6), ModelSpec({TermSpec::edges()}));
  EXPECT_FALSE(fit.converged);
  EXPECT_FALSE(fit.message.empty());
  EXPECT_FALSE(fit.diagnostics.has_value());
}

TEST(Mple, StandardErrorsShrinkWithDyadCount) {
  const ModelSpec edges({TermSpec::edges()});
  double previous = INFINITY;
  for (int n : {20, 40, 80}) {
    const int dyads = n * (n - 1) / 2;
    const auto fit = mple(graph_with_edges(n, dyads / 10), edges);
    ASSERT_EQ(fit.std_errors.size(), 1);
    EXPECT_GT(fit.std_errors[0], 0.0);
    EXPECT_LT(fit.std_errors[0], previous);
    previous = fit.std_errors[0];
  }
}

TEST(Exact, UniformAtZeroTheta) {
  const ModelSpec model({TermSpec::edges(), TermSpec::gwesp()});
  const ExactDistribution dist(5, model);
  double total = 0.0;
  for (double c : dist.counts()) total += c;
  EXPECT_DOUBLE_EQ(total, 1024.0);
  EXPECT_NEAR(dist.log_normalizer(ThetaVector::Zero(2)), 10.0 * std::log(2.0), 1e-12);
  Rng rng(2);
  const double a = exact_loglik(ThetaVector::Zero(2), random_graph(5, 0.5, rng), model);
  const double b = exact_loglik(ThetaVector::Zero(2), complete_graph(5), model);
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(a, -10.0 * std::log(2.0), 1e-12);
}

TEST(Exact, EnumeratedMomentsMatchBruteForce) {
  const auto model = ModelSpec::group_default();
  ThetaVector theta(3);
  theta << -1.0, 0.5, -0.2;
  const ExactDistribution dist(5, model);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < 1024; ++mask) {
    const auto s = eval_stats(graph_from_mask(5, mask), model);
    const double w = std::exp(theta.dot(s));
    mean += w * s;
    z += w;
  }
  EXPECT_NEAR(dist.log_normalizer(theta), std::log(z), 1e-10);
  EXPECT_LT((dist.mean(theta) - mean / z).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Exact, EdgesOnlyMleIsLogitDensity) {
  const ModelSpec edges({TermSpec::edges()});
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const auto fit = exact_mle(g, edges);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.theta[0], std::log(3.0 / 7.0), 1e-8);
  EXPECT_NEAR(fit.theta[0], mple(g, edges).theta[0], 1e-6);
}

TEST(Exact, MomentMatchAtMle) {
  const ModelSpec model({TermSpec::edges(), TermSpec::gwesp()});
  Rng rng(3);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 5; ++trial) {
    const Graph g = random_graph(6, 0.5, rng);
    const auto fit = exact_mle(g, model);
    if (!fit.converged) continue;
    const ExactDistribution dist(6, model);
    EXPECT_LT((dist.mean(fit.theta) - eval_stats(g, model)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(fit.log_likelihood.has_value());
    ++checked;
  }
  EXPECT_EQ(checked, 5);
}

TEST(Exact, AgreesWithMpleForDyadIndependentModels) {
  const ModelSpec model({TermSpec::edges(), TermSpec::nodematch("hemi")});
  const NodeAttributes attrs{"hemi", {"l", "l", "l", "r", "r", "r"}};
  const Graph g = make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {2, 3}, {0, 5}, {4, 5}, {3, 5}});
  const auto exact = exact_mle(g, model, &attrs);
  const auto pseudo = mple(g, model, &attrs);
  ASSERT_TRUE(exact.converged);
  ASSERT_TRUE(pseudo.converged);
  EXPECT_LT((exact.theta - pseudo.theta).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Exact, RefusesLargeGraphs) {
  const ModelSpec edges({TermSpec::edges()});
  EXPECT_THROW(exact_mle(Graph(7), edges), EstimationError);
  EXPECT_THROW(exact_mle(Graph(8), edges, nullptr, 8), EstimationError);
  EXPECT_THROW(exact_loglik(ThetaVector::Zero(2), Graph(4), edges), DimensionError);
}

TEST(McmcMle, EdgesOnlyMatchesLogitDensity) {
  const ModelSpec edges({TermSpec::edges()});
  const Graph g = graph_with_edges(30, 87);
  EstimatorConfig cfg;
  cfg.sample_size = 4000;
  cfg.burn_in = 20000;
  // Per-dyad lag correlation is about exp(-1.25 * interval / dyads), negligible here,
  // so the retained samples are effectively independent.
  cfg.interval = 3000;
  cfg.seed = 11;
  const auto fit = mcmc_mle(g, edges, cfg);
  ASSERT_TRUE(fit.converged) << fit.message;
  ASSERT_TRUE(fit.diagnostics.has_value());
  EXPECT_LT(fit.diagnostics->t_ratios.maxCoeff(), 0.1);
  // Monte Carlo error of the root of the moment equation: se / sqrt(N).
  const double mc_se = fit.std_errors[0] / std::sqrt(static_cast<double>(cfg.sample_size));
  EXPECT_NEAR(fit.theta[0], logit_density(g), 2.0 * mc_se);
}

TEST(McmcMle, MatchesExactMleOnSixNodes) {
  const ModelSpec model({TermSpec::edges(), TermSpec::gwesp()});
  const Graph g = make_graph(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}});
  const auto exact = exact_mle(g, model);
  ASSERT_TRUE(exact.converged);
  EstimatorConfig cfg;
  cfg.sample_size = 50000;
  cfg.burn_in = 1000;
  cfg.interval = 30;
  cfg.seed = 5;
  const auto fit = mcmc_mle(g, model, cfg);
  EXPECT_TRUE(fit.converged) << fit.message;
  EXPECT_LT((fit.theta - exact.theta).cwiseAbs().maxCoeff(), 0.05)
      << "mcmc " << fit.theta.transpose() << " exact " << exact.theta.transpose();
}

TEST(McmcMle, DeterministicGivenSeed) {
  const auto model = ModelSpec::group_default();
  Rng rng(4);
  const Graph g = random_graph(15, 0.25, rng);
  EstimatorConfig cfg;
  cfg.sample_size = 200;
  cfg.burn_in = 1000;
  cfg.interval = 100;
  cfg.max_iterations = 3;
  cfg.seed = 9;
  const auto a = mcmc_mle(g, model, cfg);
  const auto b = mcmc_mle(g, model, cfg);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.std_errors, b.std_errors);
}

TEST(McmcMle, DegenerateStartIsReported) {
  const ModelSpec edges({TermSpec::edges()});
  EstimatorConfig cfg;
  cfg.sample_size = 200;
  cfg.burn_in = 500;
  cfg.interval = 10;
  ThetaVector start(1);
  start << -30.0;
  cfg.initial_theta = start;
  try {
    mcmc_mle(graph_with_edges(10, 5), edges, cfg);
    FAIL() << "expected DegeneracyError";
  } catch (const DegeneracyError& e) {
    EXPECT_EQ(e.term(), "edges");
  }
}

TEST(McmcMle, RejectsEmptyAndCompleteGraphs) {
  const ModelSpec edges({TermSpec::edges()});
  EstimatorConfig cfg;
  EXPECT_THROW(mcmc_mle(Graph(5), edges, cfg), EstimationError);
  EXPECT_THROW(mcmc_mle(complete_graph(5), edges, cfg), EstimationError);
}

TEST(Fit, DispatchesOnMethod) {
  const ModelSpec edges({TermSpec::edges()});
  const Graph g = path_graph(5);
  EstimatorConfig cfg;
  cfg.method = EstimationMethod::Mple;
  EXPECT_EQ(fit(g, edges, cfg).method, EstimationMethod::Mple);
  cfg.method = EstimationMethod::Exact;
  const auto f = fit(g, edges, cfg);
  EXPECT_EQ(f.method, EstimationMethod::Exact);
  EXPECT_NEAR(f.theta[0], std::log(4.0 / 6.0), 1e-8);
}

TEST(Exact, TriangleFreeGraphHasNoGwespMle) {
  const ModelSpec model({TermSpec::edges(), TermSpec::gwesp()});
  const auto fit = exact_mle(cycle_graph(6), model);
  EXPECT_FALSE(fit.converged);
  EXPECT_FALSE(fit.message.empty());
}

// A single 90-node network pins theta_edges only to about +-0.3, so recovery
// is checked on the average over replicate networks.
TEST(McmcMle, RecoversGroupModelParametersOnAverage) {
  const auto model = ModelSpec::group_default();
  ThetaVector truth(3);
  truth << -2.7, 1.0, -0.3;
  const int replicates = 6;
  ThetaVector sum = ThetaVector::Zero(3);
  for (int r = 1; r <= replicates; ++r) {
    SamplerConfig sc;
    sc.seed = static_cast<std::uint64_t>(r);
    const Graph g = sample_networks(model, truth, 90, sc).graphs.front();
    EstimatorConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(r);
    const auto fit = mcmc_mle(g, model, cfg);
    ASSERT_TRUE(fit.theta.allFinite());
    EXPECT_TRUE((fit.std_errors.array() >= 0.0).all());
    sum += fit.theta;
  }
  const ThetaVector mean = sum / replicates;
  EXPECT_LT((mean - truth).cwiseAbs().maxCoeff(), 0.2) << mean.transpose();
}
