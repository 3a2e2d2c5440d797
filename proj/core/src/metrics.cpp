#include "brainergm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brainergm/error.hpp"

namespace brainergm {

namespace {

// Unweighted BFS hop counts from `source`.
void bfs_hops(const Graph& g, NodeId source, std::vector<int>& dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), DistanceMatrix::kUnreachable);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == DistanceMatrix::kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

double inverse_distance_sum(const DistanceMatrix& d) {
  double sum = 0.0;
  for (NodeId i = 0; i < d.size(); ++i) {
    for (NodeId j = 0; j < d.size(); ++j) {
      if (i != j && d.reachable(i, j)) sum += 1.0 / d(i, j);
    }
  }
  return sum;
}

// Efficiency of the subgraph induced by `nodes`, by BFS restricted to them.
double induced_efficiency(const Graph& g, const std::vector<NodeId>& nodes, std::vector<int>& local_index) {
  const auto m = static_cast<int>(nodes.size());
  if (m < 2) return 0.0;
  for (int a = 0; a < m; ++a) local_index[nodes[a]] = a;
  std::vector<int> dist(static_cast<std::size_t>(m));
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (int s = 0; s < m; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int a = queue[head];
      for (NodeId w : g.neighbors(nodes[a])) {
        const int b = local_index[w];
        if (b >= 0 && dist[b] < 0) {
          dist[b] = dist[a] + 1;
          queue.push_back(b);
          sum += 1.0 / dist[b];
        }
      }
    }
  }
  for (NodeId v : nodes) local_index[v] = -1;
  return sum / (static_cast<double>(m) * (m - 1));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

DistanceMatrix geodesic_distances(const Graph& g) {
  const int n = g.num_nodes();
  DistanceMatrix d(n);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<NodeId> queue;
  queue.reserve(static_cast<std::size_t>(n));
  for (NodeId s = 0; s < n; ++s) {
    bfs_hops(g, s, dist, queue);
    for (NodeId t = 0; t < n; ++t) d(s, t) = dist[t];
  }
  return d;
}

double characteristic_path_length(const DistanceMatrix& d) {
  const double sum = inverse_distance_sum(d);
  if (sum <= 0.0) throw MetricError("characteristic path length undefined: no connected node pairs");
  const double n = d.size();
  return n * (n - 1.0) / sum;
}

double characteristic_path_length(const Graph& g) { return characteristic_path_length(geodesic_distances(g)); }

double global_efficiency(const DistanceMatrix& d) {
  const double n = d.size();
  if (d.size() < 2) return 0.0;
  return inverse_distance_sum(d) / (n * (n - 1.0));
}

double global_efficiency(const Graph& g) { return global_efficiency(geodesic_distances(g)); }

NodalValues clustering_coefficients(const Graph& g) {
  const int n = g.num_nodes();
  NodalValues out;
  out.per_node.assign(static_cast<std::size_t>(n), 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const auto& nb = g.neighbors(i);
    const auto k = static_cast<std::int64_t>(nb.size());
    if (k < 2) continue;
    std::int64_t links = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (g.has_edge(nb[a], nb[b])) ++links;
      }
    }
    out.per_node[i] = static_cast<double>(links) / (static_cast<double>(k * (k - 1)) / 2.0);
  }
  out.mean = mean_of(out.per_node);
  return out;
}

NodalValues local_efficiency(const Graph& g) {
  const int n = g.num_nodes();
  NodalValues out;
  out.per_node.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<int> local_index(static_cast<std::size_t>(n), -1);
  for (NodeId i = 0; i < n; ++i) {
    if (g.degree(i) < 2) continue;
    out.per_node[i] = induced_efficiency(g, g.neighbors(i), local_index);
  }
  out.mean = mean_of(out.per_node);
  return out;
}

std::optional<double> assortativity(const Graph& g) {
  const auto m = static_cast<std::int64_t>(g.num_edges());
  if (m == 0) throw MetricError("assortativity undefined for an edgeless graph");
  // r = (4M*sum(jk) - S1^2) / (2M*sum(j^2+k^2) - S1^2), S1 = sum(j+k); exact in integers.
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
  std::int64_t s3 = 0;
  for (const Edge& e : g.edges()) {
    const std::int64_t a = g.degree(e.u);
    const std::int64_t b = g.degree(e.v);
    s1 += a + b;
    s2 += a * a + b * b;
    s3 += a * b;
  }
  const long double num = 4.0L * m * s3 - static_cast<long double>(s1) * s1;
  const long double den = 2.0L * m * s2 - static_cast<long double>(s1) * s1;
  if (den == 0.0L) return std::nullopt;
  return static_cast<double>(num / den);
}

TriadCensus triad_census(const Graph& g) {
  const std::int64_t n = g.num_nodes();
  if (n < 3) throw MetricError("triad census needs n >= 3");
  std::int64_t wedges = 0;
  std::int64_t triangles3 = 0;  // each triangle counted 3 times (once per apex)
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const auto& nb = g.neighbors(i);
    const auto k = static_cast<std::int64_t>(nb.size());
    wedges += k * (k - 1) / 2;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (g.has_edge(nb[a], nb[b])) ++triangles3;
      }
    }
  }
  TriadCensus t;
  t.triangle = triangles3 / 3;
  t.two_path = wedges - 3 * t.triangle;
  const auto m = static_cast<std::int64_t>(g.num_edges());
  t.one_edge = m * (n - 2) - 2 * t.two_path - 3 * t.triangle;
  t.empty = n * (n - 1) * (n - 2) / 6 - t.one_edge - t.two_path - t.triangle;
  return t;
}

std::array<double, 7> MetricProfile::as_array(const std::string& owner) const {
  if (!l) throw MetricError("characteristic path length undefined for " + owner);
  if (!r) throw MetricError("assortativity undefined for " + owner + "; distance is undefined");
  return {n_c, *l, k, c, e_loc, e_glob, *r};
}

MetricProfile MetricProfile::from_array(const std::array<double, 7>& v) {
  MetricProfile p;
  p.n_c = v[0];
  p.l = v[1];
  p.k = v[2];
  p.c = v[3];
  p.e_loc = v[4];
  p.e_glob = v[5];
  p.r = v[6];
  return p;
}

MetricProfile metric_profile(const Graph& g) {
  MetricProfile p;
  p.n_c = giant_component_size(g);
  const auto d = geodesic_distances(g);
  const double inv_sum = inverse_distance_sum(d);
  const double n = g.num_nodes();
  if (inv_sum > 0.0) p.l = n * (n - 1.0) / inv_sum;
  p.e_glob = g.num_nodes() < 2 ? 0.0 : inv_sum / (n * (n - 1.0));
  p.k = degree_sequence(g).mean_degree;
  p.c = clustering_coefficients(g).mean;
  p.e_loc = local_efficiency(g).mean;
  if (g.num_edges() > 0) p.r = assortativity(g);
  return p;
}

Ecdf empirical_cdf(std::vector<double> samples) {
  Ecdf out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = static_cast<double>(i + 1) / total;
    if (!out.values.empty() && out.values.back() == samples[i]) {
      out.cumulative.back() = c;
    } else {
      out.values.push_back(samples[i]);
      out.cumulative.push_back(c);
    }
  }
  return out;
}

NodalDistributions nodal_distributions(const Graph& g) {
  const int n = g.num_nodes();
  NodalDistributions out;
  const auto d = geodesic_distances(g);
  out.path_length.resize(static_cast<std::size_t>(n));
  out.global_efficiency.resize(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    double sum = 0.0;
    for (NodeId j = 0; j < n; ++j) {
      if (j != i && d.reachable(i, j)) sum += 1.0 / d(i, j);
    }
    const double others = n - 1.0;
    out.path_length[i] = sum > 0.0 ? others / sum : std::numeric_limits<double>::infinity();
    out.global_efficiency[i] = n > 1 ? sum / others : 0.0;
  }
  out.clustering = clustering_coefficients(g).per_node;
  out.local_efficiency = local_efficiency(g).per_node;
  out.path_length_cdf = empirical_cdf(out.path_length);
  out.clustering_cdf = empirical_cdf(out.clustering);
  out.global_efficiency_cdf = empirical_cdf(out.global_efficiency);
  out.local_efficiency_cdf = empirical_cdf(out.local_efficiency);
  return out;
}

}  // namespace brainergm
