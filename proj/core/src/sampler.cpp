#include "brainergm/sampler.hpp"

#include <cmath>

#include "brainergm/error.hpp"

namespace brainergm {

std::string to_string(Proposal p) { return p == Proposal::Toggle ? "toggle" : "degree_swap"; }

std::string to_string(InitState s) {
  switch (s) {
    case InitState::Empty: return "empty";
    case InitState::Observed: return "observed";
    case InitState::DegreeSequence: return "degree_sequence";
  }
  return "empty";
}

Proposal proposal_from_string(const std::string& s) {
  if (s == "toggle") return Proposal::Toggle;
  if (s == "degree_swap" || s == "swap") return Proposal::DegreeSwap;
  throw ConfigError("unknown proposal '" + s + "'");
}

InitState init_state_from_string(const std::string& s) {
  if (s == "empty") return InitState::Empty;
  if (s == "observed") return InitState::Observed;
  if (s == "degree_sequence") return InitState::DegreeSequence;
  throw ConfigError("unknown init state '" + s + "'");
}

void SamplerConfig::validate() const {
  if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
  if (thin < 1) throw ConfigError("thin must be >= 1");
}

double log_unnormalized_density(const ThetaVector& theta, const Graph& g, const ModelSpec& model,
                                const NodeAttributes* attrs) {
  if (static_cast<std::size_t>(theta.size()) != model.size()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, model has " +
                         std::to_string(model.size()) + " terms");
  }
  return theta.dot(eval_stats(g, model, attrs));
}

MarkovChain::MarkovChain(const ModelSpec& model, ThetaVector theta, Graph start, Proposal proposal,
                         std::uint64_t seed, const NodeAttributes* attrs)
    : model_(model),
      attrs_(attrs),
      theta_(std::move(theta)),
      tracker_(model, std::move(start), attrs),
      proposal_(proposal),
      rng_(seed) {
  if (static_cast<std::size_t>(theta_.size()) != model_.size()) {
    throw DimensionError("theta has " + std::to_string(theta_.size()) + " entries, model has " +
                         std::to_string(model_.size()) + " terms");
  }
}

void MarkovChain::set_theta(ThetaVector theta) {
  if (theta.size() != theta_.size()) throw DimensionError("theta dimension changed");
  theta_ = std::move(theta);
}

void MarkovChain::set_verify_degrees(bool on) {
  reference_degrees_.clear();
  if (on) reference_degrees_ = degree_sequence(graph()).degrees;
}

bool MarkovChain::accept(double log_ratio) {
  if (log_ratio >= 0.0) {
    // Keep the stream position independent of the branch taken.
    rng_.next();
    return true;
  }
  return rng_.uniform() < std::exp(log_ratio);
}

// Signed change of toggling (i, j) from the current state.
double MarkovChain::delta_for(NodeId i, NodeId j, StatVector& delta) const {
  const bool present = graph().has_edge(i, j);
  if (full_evaluation_) {
    const StatVector before = eval_stats(graph(), model_, attrs_);
    const StatVector after = eval_stats(toggle_edge(graph(), i, j), model_, attrs_);
    delta = present ? StatVector(before - after) : StatVector(after - before);
  } else {
    tracker_.change(i, j, delta);
  }
  const double s = theta_.dot(delta);
  return present ? -s : s;
}

bool MarkovChain::toggle_step() {
  const int n = graph().num_nodes();
  if (n < 2) return false;
  const auto dyads = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  // Dyad index -> (i, j) with i < j, row by row.
  auto idx = static_cast<std::int64_t>(rng_.below(dyads));
  NodeId i = 0;
  std::int64_t row = n - 1;
  while (idx >= row) {
    idx -= row;
    ++i;
    --row;
  }
  const NodeId j = i + 1 + static_cast<NodeId>(idx);
  const double log_ratio = delta_for(i, j, delta_);
  if (!accept(log_ratio)) return false;
  tracker_.toggle(i, j, delta_);
  return true;
}

bool MarkovChain::swap_step() {
  const Graph& g = graph();
  const std::size_t m = g.num_edges();
  if (m < 2) return false;
  const auto e1 = static_cast<std::size_t>(rng_.below(m));
  auto e2 = static_cast<std::size_t>(rng_.below(m - 1));
  if (e2 >= e1) ++e2;
  const Edge first = g.edge_at(e1);
  const Edge second = g.edge_at(e2);
  const NodeId a = first.u;
  const NodeId b = first.v;
  NodeId c = second.u;
  NodeId d = second.v;
  if (rng_.next() & 1U) std::swap(c, d);
  // (a,b),(c,d) -> (a,c),(b,d)
  if (a == c || b == d || g.has_edge(a, c) || g.has_edge(b, d)) return false;
  double log_ratio = 0.0;
  log_ratio += delta_for(a, b, delta_);
  tracker_.toggle(a, b, delta_);
  log_ratio += delta_for(c, d, delta2_);
  tracker_.toggle(c, d, delta2_);
  log_ratio += delta_for(a, c, delta3_);
  tracker_.toggle(a, c, delta3_);
  log_ratio += delta_for(b, d, delta4_);
  tracker_.toggle(b, d, delta4_);
  if (accept(log_ratio)) return true;
  tracker_.toggle(b, d, delta4_);
  tracker_.toggle(a, c, delta3_);
  tracker_.toggle(c, d, delta2_);
  tracker_.toggle(a, b, delta_);
  return false;
}

bool MarkovChain::step() {
  ++proposals_;
  const bool moved = proposal_ == Proposal::Toggle ? toggle_step() : swap_step();
  if (moved) ++accepted_;
  if (!reference_degrees_.empty()) {
    for (NodeId v = 0; v < graph().num_nodes(); ++v) {
      if (graph().degree(v) != reference_degrees_[v]) {
        throw SamplerError("degree-preserving proposal changed the degree of node " + std::to_string(v));
      }
    }
  }
  return moved;
}

void MarkovChain::run(std::int64_t steps) {
  for (std::int64_t s = 0; s < steps; ++s) step();
}

namespace {

SampleSet run_chain(MarkovChain& chain, const SamplerConfig& config) {
  SampleSet out;
  chain.run(config.burn_in);
  out.stats.reserve(config.num_samples);
  for (std::size_t k = 0; k < config.num_samples; ++k) {
    chain.run(config.thin);
    out.stats.push_back(chain.stats());
    if (config.keep_graphs) out.graphs.push_back(chain.graph());
  }
  out.proposals = chain.proposals();
  out.acceptance_rate =
      chain.proposals() > 0 ? static_cast<double>(chain.accepted()) / static_cast<double>(chain.proposals()) : 0.0;
  return out;
}

}  // namespace

SampleSet sample_networks(const ModelSpec& model, const ThetaVector& theta, int n, const SamplerConfig& config,
                          const NodeAttributes* attrs, const Graph* observed) {
  config.validate();
  if (config.proposal != Proposal::Toggle) throw ConfigError("sample_networks needs the toggle proposal");
  if (n < 1) throw SamplerError("node count must be >= 1");
  if (static_cast<std::size_t>(theta.size()) != model.size()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, model has " +
                         std::to_string(model.size()) + " terms");
  }
  Graph start(n);
  if (config.init == InitState::Observed) {
    if (observed == nullptr) throw ConfigError("init=observed needs an observed graph");
    if (observed->num_nodes() != n) throw ConfigError("observed graph has a different node count");
    start = *observed;
  } else if (config.init == InitState::DegreeSequence) {
    if (observed == nullptr) throw ConfigError("init=degree_sequence needs a graph to take degrees from");
    start = havel_hakimi(degree_sequence(*observed).degrees);
  }
  MarkovChain chain(model, theta, std::move(start), Proposal::Toggle, config.seed, attrs);
  chain.set_full_evaluation(config.full_evaluation);
  return run_chain(chain, config);
}

SampleSet sample_degree_constrained(const ModelSpec& model, const ThetaVector& theta,
                                    const DegreeSequence& reference, const SamplerConfig& config,
                                    const NodeAttributes* attrs) {
  config.validate();
  if (config.proposal != Proposal::DegreeSwap) {
    throw ConfigError("sample_degree_constrained needs the degree_swap proposal");
  }
  if (!is_graphical(reference.degrees)) {
    throw SamplerError("reference degree sequence is not graphical (Erdos-Gallai)");
  }
  MarkovChain chain(model, theta, havel_hakimi(reference.degrees), Proposal::DegreeSwap, config.seed, attrs);
  chain.set_full_evaluation(config.full_evaluation);
  chain.set_verify_degrees(config.verify_degrees);
  return run_chain(chain, config);
}

}  // namespace brainergm
