#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace brainergm {

using NodeId = int;

// Unordered node pair stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Undirected simple graph on nodes 0..n-1.
///
/// Adjacency is kept three ways: a dense slot table (O(1) membership and the
/// index of the edge in the edge list), an unordered edge list (O(1) uniform
/// edge picks for swap proposals) and per-node neighbor lists (shared-partner
/// updates after a toggle only walk the two endpoint neighborhoods).
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  static Graph from_edges(int n, std::span<const Edge> edges);

  int num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edge_list_.size(); }
  std::size_t num_dyads() const noexcept {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0) / 2;
  }

  bool has_edge(NodeId i, NodeId j) const;
  int degree(NodeId i) const { return static_cast<int>(adj_[i].size()); }
  const std::vector<NodeId>& neighbors(NodeId i) const { return adj_[i]; }

  // Edge by position in the internal (unordered) edge list; valid until the
  // next mutation.
  const Edge& edge_at(std::size_t index) const { return edge_list_[index]; }

  /// Flips dyad (i, j). Returns true if the edge is present afterwards.
  bool toggle(NodeId i, NodeId j);
  void add_edge(NodeId i, NodeId j);
  void remove_edge(NodeId i, NodeId j);

  /// Sorted (u < v, lexicographic) edge list.
  std::vector<Edge> edges() const;

  // Throws InvalidDyadError unless i != j and both are in range.
  void check_dyad(NodeId i, NodeId j) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::size_t slot_index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  void insert_unchecked(NodeId i, NodeId j);
  void erase_unchecked(NodeId i, NodeId j);

  int n_ = 0;
  std::vector<std::int32_t> slot_;  // n*n, edge-list index or -1
  std::vector<Edge> edge_list_;
  std::vector<std::vector<NodeId>> adj_;
};

/// Value-returning toggle: `g` with dyad (i, j) flipped.
Graph toggle_edge(Graph g, NodeId i, NodeId j);

// One categorical value per node (e.g. anatomical lobe).
struct NodeAttributes {
  std::string name;
  std::vector<std::string> labels;

  // Dense integer codes in order of first appearance.
  std::vector<int> codes() const;
};

struct DegreeSequence {
  std::vector<int> degrees;
  double mean_degree = 0.0;

  DegreeSequence() = default;
  explicit DegreeSequence(std::vector<int> d);

  friend bool operator==(const DegreeSequence& a, const DegreeSequence& b) {
    return a.degrees == b.degrees;
  }
};

DegreeSequence degree_sequence(const Graph& g);

/// Counts of nodes per degree value 0..n-1.
std::vector<std::int64_t> degree_distribution(const Graph& g);

// Edgewise / non-edgewise / dyadwise shared partner counts indexed 0..n-2.
struct SharedPartnerDistributions {
  std::vector<std::int64_t> esp;
  std::vector<std::int64_t> nsp;
  std::vector<std::int64_t> dsp;
};

SharedPartnerDistributions shared_partner_distributions(const Graph& g);

/// Dense n*n matrix of shared-partner counts (row-major, zero diagonal).
std::vector<int> shared_partner_matrix(const Graph& g);

/// Component id for every node; ids are assigned in order of the lowest node.
std::vector<int> connected_components(const Graph& g);

/// Node count of the largest component. An edgeless graph has size 1.
int giant_component_size(const Graph& g);

/// Erdos-Gallai test.
bool is_graphical(std::span<const int> degrees);

/// Deterministic Havel-Hakimi realization (highest residual degree first, ties
/// by lower node id). Throws SamplerError for non-graphical input.
Graph havel_hakimi(std::span<const int> degrees);

}  // namespace brainergm
