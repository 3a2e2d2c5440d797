#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brainergm/graph.hpp"
#include "brainergm/rng.hpp"
#include "brainergm/terms.hpp"

namespace brainergm {

enum class Proposal { Toggle, DegreeSwap };
enum class InitState { Empty, Observed, DegreeSequence };

std::string to_string(Proposal p);
std::string to_string(InitState s);
Proposal proposal_from_string(const std::string& s);
InitState init_state_from_string(const std::string& s);

struct SamplerConfig {
  std::int64_t burn_in = 50'000;
  std::int64_t thin = 10'000;
  std::size_t num_samples = 1;
  std::uint64_t seed = 0;
  Proposal proposal = Proposal::Toggle;
  InitState init = InitState::Empty;
  bool keep_graphs = true;
  // Re-check the degree sequence after every swap step.
  bool verify_degrees = false;
  // Compute every acceptance ratio from two full evaluations instead of the
  // incremental change statistics. Slow; for cross-checking only.
  bool full_evaluation = false;

  void validate() const;
};

struct SampleSet {
  std::vector<Graph> graphs;
  std::vector<StatVector> stats;
  double acceptance_rate = 0.0;
  std::int64_t proposals = 0;
};

/// theta . g(y); the normalizing constant is omitted.
double log_unnormalized_density(const ThetaVector& theta, const Graph& g, const ModelSpec& model,
                                const NodeAttributes* attrs = nullptr);

/// Metropolis-Hastings chain at fixed theta. Owns its working graph, caches
/// and random stream.
class MarkovChain {
 public:
  MarkovChain(const ModelSpec& model, ThetaVector theta, Graph start, Proposal proposal, std::uint64_t seed,
              const NodeAttributes* attrs = nullptr);

  void set_theta(ThetaVector theta);
  const ThetaVector& theta() const noexcept { return theta_; }

  /// Runs `steps` proposals.
  void run(std::int64_t steps);
  bool step();

  const Graph& graph() const noexcept { return tracker_.graph(); }
  const StatVector& stats() const noexcept { return tracker_.stats(); }
  std::int64_t proposals() const noexcept { return proposals_; }
  std::int64_t accepted() const noexcept { return accepted_; }

  void set_full_evaluation(bool on) { full_evaluation_ = on; }
  void set_verify_degrees(bool on);

 private:
  bool toggle_step();
  bool swap_step();
  double delta_for(NodeId i, NodeId j, StatVector& delta) const;
  bool accept(double log_ratio);

  ModelSpec model_;
  const NodeAttributes* attrs_;
  ThetaVector theta_;
  ChangeStatTracker tracker_;
  Proposal proposal_;
  Rng rng_;
  std::int64_t proposals_ = 0;
  std::int64_t accepted_ = 0;
  bool full_evaluation_ = false;
  std::vector<int> reference_degrees_;
  StatVector delta_;
  StatVector delta2_;
  StatVector delta3_;
  StatVector delta4_;
};

/// Unconstrained simulation by uniform dyad toggles. `observed` is the warm
/// start when config.init == Observed.
SampleSet sample_networks(const ModelSpec& model, const ThetaVector& theta, int n, const SamplerConfig& config,
                          const NodeAttributes* attrs = nullptr, const Graph* observed = nullptr);

/// Simulation restricted to graphs with exactly the degree sequence `reference`,
/// by double edge swaps started from the Havel-Hakimi realization.
SampleSet sample_degree_constrained(const ModelSpec& model, const ThetaVector& theta,
                                    const DegreeSequence& reference, const SamplerConfig& config,
                                    const NodeAttributes* attrs = nullptr);

}  // namespace brainergm
