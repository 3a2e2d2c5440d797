#include <benchmark/benchmark.h>

#include "brainergm/correlation.hpp"
#include "brainergm/estimator.hpp"
#include "brainergm/metrics.hpp"
#include "brainergm/rng.hpp"
#include "brainergm/sampler.hpp"
#include "brainergm/terms.hpp"

using namespace brainergm;

namespace {

ThetaVector group_theta_default() {
  ThetaVector t(3);
  t << -2.7, 1.0, -0.3;
  return t;
}

Graph brain_like(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
  }
  return threshold_to_density(CorrelationMatrix(m));
}

}  // namespace

static void BM_Threshold(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
  }
  const CorrelationMatrix corr(m);
  for (auto _ : state) benchmark::DoNotOptimize(threshold_to_density(corr));
}
BENCHMARK(BM_Threshold)->Arg(90)->Arg(256);

static void BM_MetricProfile(benchmark::State& state) {
  const Graph g = brain_like(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(metric_profile(g));
}
BENCHMARK(BM_MetricProfile)->Arg(90)->Arg(256);

static void BM_ChangeStats(benchmark::State& state) {
  const Graph g = brain_like(90, 3);
  const ModelSpec model = ModelSpec::group_default();
  Rng rng(4);
  for (auto _ : state) {
    const auto i = static_cast<NodeId>(rng.below(90));
    const auto j = static_cast<NodeId>((i + 1 + rng.below(89)) % 90);
    benchmark::DoNotOptimize(change_stats(g, model, i, j));
  }
}
BENCHMARK(BM_ChangeStats);

static void BM_SamplerProposals(benchmark::State& state) {
  const ModelSpec model = ModelSpec::group_default();
  SamplerConfig cfg;
  cfg.burn_in = state.range(0);
  cfg.thin = 1;
  cfg.keep_graphs = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_networks(model, group_theta_default(), 90, cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplerProposals)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_DegreeSwapProposals(benchmark::State& state) {
  const ModelSpec model = ModelSpec::group_default();
  const DegreeSequence ds = degree_sequence(brain_like(90, 5));
  SamplerConfig cfg;
  cfg.burn_in = state.range(0);
  cfg.thin = 1;
  cfg.keep_graphs = false;
  cfg.proposal = Proposal::DegreeSwap;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_degree_constrained(model, group_theta_default(), ds, cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DegreeSwapProposals)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_Mple(benchmark::State& state) {
  const Graph g = brain_like(90, 6);
  const ModelSpec model = ModelSpec::group_default();
  for (auto _ : state) benchmark::DoNotOptimize(mple(g, model));
}
BENCHMARK(BM_Mple)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
