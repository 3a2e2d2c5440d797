#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "brainergm/graph.hpp"

namespace brainergm {

// Sufficient statistics g(y) and coefficients theta share the term order of a
// ModelSpec.
using StatVector = Eigen::VectorXd;
using ThetaVector = Eigen::VectorXd;

enum class TermKind { Edges, TwoPath, KDegree, GWD, GWESP, GWNSP, GWDSP, Nodematch };

inline constexpr double kDefaultDecay = 0.75;

struct TermSpec {
  TermKind kind = TermKind::Edges;
  double tau = 0.0;        // decay, geometrically weighted kinds only
  int k = 0;               // KDegree only
  std::string attribute;   // Nodematch only; empty matches any attribute file

  static TermSpec edges() { return make(TermKind::Edges); }
  static TermSpec two_path() { return make(TermKind::TwoPath); }
  static TermSpec k_degree(int k) { return make(TermKind::KDegree, 0.0, k); }
  static TermSpec gwd(double tau = kDefaultDecay) { return make(TermKind::GWD, tau); }
  static TermSpec gwesp(double tau = kDefaultDecay) { return make(TermKind::GWESP, tau); }
  static TermSpec gwnsp(double tau = kDefaultDecay) { return make(TermKind::GWNSP, tau); }
  static TermSpec gwdsp(double tau = kDefaultDecay) { return make(TermKind::GWDSP, tau); }
  static TermSpec nodematch(std::string attribute = {}) {
    return make(TermKind::Nodematch, 0.0, 0, std::move(attribute));
  }
  static TermSpec make(TermKind kind, double tau = 0.0, int k = 0, std::string attribute = {}) {
    TermSpec t;
    t.kind = kind;
    t.tau = tau;
    t.k = k;
    t.attribute = std::move(attribute);
    return t;
  }

  bool geometrically_weighted() const;
  std::string label() const;

  friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

std::string to_string(TermKind kind);
TermKind term_kind_from_string(const std::string& name);

class ModelSpec {
 public:
  ModelSpec() = default;
  explicit ModelSpec(std::vector<TermSpec> terms);

  /// Edges + GWESP(tau) + GWNSP(tau).
  static ModelSpec group_default(double tau = kDefaultDecay);

  const std::vector<TermSpec>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const TermSpec& operator[](std::size_t i) const { return terms_[i]; }
  bool empty() const noexcept { return terms_.empty(); }

  bool contains(TermKind kind) const;
  bool needs_attributes() const { return contains(TermKind::Nodematch); }
  std::vector<std::string> labels() const;
  std::string label() const;

  ModelSpec with_term(TermSpec t) const;
  ModelSpec without_term(std::size_t index) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  std::vector<TermSpec> terms_;
};

/// Parses "edges + gwesp(0.75) + gwnsp" (also comma separated), the format of
/// ModelSpec::label(). Geometrically weighted terms without an argument take
/// `default_tau`; kdegree needs its k, nodematch takes an optional attribute.
ModelSpec parse_model(const std::string& text, double default_tau = kDefaultDecay);

/// Full evaluation of g(y). `attrs` is required iff the model has Nodematch.
StatVector eval_stats(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs = nullptr);

/// g(y with dyad) - g(y without dyad), from the endpoint neighborhoods only.
StatVector change_stats(const Graph& g, const ModelSpec& model, NodeId i, NodeId j,
                        const NodeAttributes* attrs = nullptr);

namespace detail {

// Model with per-n lookup tables for the geometric weights.
struct CompiledTerm {
  TermKind kind;
  int k = 0;
  std::vector<double> weight;      // v(s) = e^tau (1 - (1 - e^-tau)^s)
  std::vector<double> increment;   // v(s+1) - v(s) = (1 - e^-tau)^s
};

struct CompiledModel {
  std::vector<CompiledTerm> terms;
  std::vector<int> codes;  // attribute codes, empty unless Nodematch
  bool needs_partners = false;

  CompiledModel() = default;
  CompiledModel(const ModelSpec& model, int n, const NodeAttributes* attrs);
};

}  // namespace detail

/// Graph plus shared-partner cache and running statistics for one sampler
/// chain. A toggle costs O(k_i + k_j) per shared-partner term. Not shared
/// between threads.
class ChangeStatTracker {
 public:
  ChangeStatTracker(const ModelSpec& model, Graph start, const NodeAttributes* attrs = nullptr);

  const Graph& graph() const noexcept { return graph_; }
  const StatVector& stats() const noexcept { return stats_; }
  std::size_t dimension() const noexcept { return model_.terms.size(); }

  /// Writes g(y + ij) - g(y - ij) into `out` (resized as needed).
  void change(NodeId i, NodeId j, StatVector& out) const;

  /// Flips (i, j) and updates the cache. `delta` must equal change(i, j).
  void toggle(NodeId i, NodeId j, const StatVector& delta);
  void toggle(NodeId i, NodeId j);

  /// Replaces the working graph and recomputes everything.
  void reset(Graph g);

 private:
  int& partners(NodeId a, NodeId b) {
    return shared_[static_cast<std::size_t>(a) * static_cast<std::size_t>(graph_.num_nodes()) +
                   static_cast<std::size_t>(b)];
  }

  detail::CompiledModel model_;
  Graph graph_;
  std::vector<int> shared_;
  StatVector stats_;
  mutable StatVector scratch_;
};

}  // namespace brainergm
