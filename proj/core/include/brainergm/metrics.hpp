#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "brainergm/graph.hpp"

namespace brainergm {

// Dense all-pairs hop distances.
class DistanceMatrix {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  DistanceMatrix() = default;
  explicit DistanceMatrix(int n)
      : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreachable) {}

  int size() const noexcept { return n_; }
  int operator()(NodeId i, NodeId j) const { return d_[index(i, j)]; }
  int& operator()(NodeId i, NodeId j) { return d_[index(i, j)]; }
  bool reachable(NodeId i, NodeId j) const { return (*this)(i, j) != kUnreachable; }

 private:
  std::size_t index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<int> d_;
};

DistanceMatrix geodesic_distances(const Graph& g);

/// Harmonic-mean path length N(N-1) / sum_{i!=j} 1/d_ij, where unreachable
/// pairs contribute 0 to the sum. Throws MetricError when no pair is connected.
double characteristic_path_length(const Graph& g);
double characteristic_path_length(const DistanceMatrix& d);

/// sum_{i!=j} 1/d_ij / (N(N-1)); 0 for edgeless graphs or N < 2.
double global_efficiency(const Graph& g);
double global_efficiency(const DistanceMatrix& d);

struct NodalValues {
  std::vector<double> per_node;
  double mean = 0.0;
};

/// Watts-Strogatz clustering. C_i = 0 for k_i < 2.
NodalValues clustering_coefficients(const Graph& g);

/// Efficiency of the subgraph induced by each node's neighbors. 0 for k_i < 2.
NodalValues local_efficiency(const Graph& g);

/// Newman degree assortativity; nullopt when every edge joins equal degrees
/// (zero variance). Throws MetricError for an edgeless graph.
std::optional<double> assortativity(const Graph& g);

struct TriadCensus {
  std::int64_t empty = 0;
  std::int64_t one_edge = 0;
  std::int64_t two_path = 0;
  std::int64_t triangle = 0;

  std::int64_t total() const { return empty + one_edge + two_path + triangle; }
  friend bool operator==(const TriadCensus&, const TriadCensus&) = default;
};

/// Throws MetricError for n < 3.
TriadCensus triad_census(const Graph& g);

inline constexpr std::array<const char*, 7> kMetricNames = {"N_c", "L", "K", "C", "E_loc", "E_glob", "R"};

// Whole-network assessment record. Undefined L (no connected pair) and
// undefined R (edgeless or zero degree variance) are carried as nullopt.
struct MetricProfile {
  double n_c = 0.0;
  std::optional<double> l;
  double k = 0.0;
  double c = 0.0;
  double e_loc = 0.0;
  double e_glob = 0.0;
  std::optional<double> r;

  bool fully_defined() const { return l.has_value() && r.has_value(); }

  /// (N_c, L, K, C, E_loc, E_glob, R). Throws MetricError naming `owner` when
  /// L or R is undefined.
  std::array<double, 7> as_array(const std::string& owner = "network") const;
  static MetricProfile from_array(const std::array<double, 7>& v);
};

MetricProfile metric_profile(const Graph& g);

// Empirical CDF stored at the distinct sorted values.
struct Ecdf {
  std::vector<double> values;
  std::vector<double> cumulative;
};

Ecdf empirical_cdf(std::vector<double> samples);

struct NodalDistributions {
  // Per-node harmonic-mean distance from the node to all others (inf for an
  // isolated node), clustering, efficiency contribution, local efficiency.
  std::vector<double> path_length;
  std::vector<double> clustering;
  std::vector<double> global_efficiency;
  std::vector<double> local_efficiency;

  Ecdf path_length_cdf;
  Ecdf clustering_cdf;
  Ecdf global_efficiency_cdf;
  Ecdf local_efficiency_cdf;
};

NodalDistributions nodal_distributions(const Graph& g);

}  // namespace brainergm
