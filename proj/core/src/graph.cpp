#include "brainergm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "brainergm/error.hpp"

namespace brainergm {

Graph::Graph(int n) : n_(n) {
  if (n < 1) throw InvalidDyadError("graph needs at least one node, got n=" + std::to_string(n));
  slot_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  adj_.resize(static_cast<std::size_t>(n));
}

Graph Graph::from_edges(int n, std::span<const Edge> edges) {
  Graph g(n);
  for (const Edge& e : edges) g.add_edge(e.u, e.v);
  return g;
}

void Graph::check_dyad(NodeId i, NodeId j) const {
  if (i == j) throw InvalidDyadError("self-loop dyad (" + std::to_string(i) + "," + std::to_string(j) + ")");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw InvalidDyadError("dyad (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of range for n=" + std::to_string(n_));
  }
}

bool Graph::has_edge(NodeId i, NodeId j) const { return slot_[slot_index(i, j)] >= 0; }

void Graph::insert_unchecked(NodeId i, NodeId j) {
  const auto idx = static_cast<std::int32_t>(edge_list_.size());
  edge_list_.push_back(make_edge(i, j));
  slot_[slot_index(i, j)] = idx;
  slot_[slot_index(j, i)] = idx;
  adj_[i].push_back(j);
  adj_[j].push_back(i);
}

namespace {
void erase_value(std::vector<NodeId>& v, NodeId x) {
  auto it = std::find(v.begin(), v.end(), x);
  *it = v.back();
  v.pop_back();
}
}  // namespace

void Graph::erase_unchecked(NodeId i, NodeId j) {
  const std::int32_t idx = slot_[slot_index(i, j)];
  const Edge moved = edge_list_.back();
  edge_list_[static_cast<std::size_t>(idx)] = moved;
  slot_[slot_index(moved.u, moved.v)] = idx;
  slot_[slot_index(moved.v, moved.u)] = idx;
  edge_list_.pop_back();
  slot_[slot_index(i, j)] = -1;
  slot_[slot_index(j, i)] = -1;
  erase_value(adj_[i], j);
  erase_value(adj_[j], i);
}

bool Graph::toggle(NodeId i, NodeId j) {
  check_dyad(i, j);
  if (has_edge(i, j)) {
    erase_unchecked(i, j);
    return false;
  }
  insert_unchecked(i, j);
  return true;
}

void Graph::add_edge(NodeId i, NodeId j) {
  check_dyad(i, j);
  if (has_edge(i, j)) {
    throw InvalidDyadError("duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  insert_unchecked(i, j);
}

void Graph::remove_edge(NodeId i, NodeId j) {
  check_dyad(i, j);
  if (!has_edge(i, j)) {
    throw InvalidDyadError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") not present");
  }
  erase_unchecked(i, j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out = edge_list_;
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.n_ == b.n_ && a.num_edges() == b.num_edges() && a.edges() == b.edges();
}

Graph toggle_edge(Graph g, NodeId i, NodeId j) {
  g.toggle(i, j);
  return g;
}

std::vector<int> NodeAttributes::codes() const {
  std::unordered_map<std::string, int> seen;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = seen.emplace(label, static_cast<int>(seen.size()));
    out.push_back(it->second);
  }
  return out;
}

DegreeSequence::DegreeSequence(std::vector<int> d) : degrees(std::move(d)) {
  if (!degrees.empty()) {
    const double total = std::accumulate(degrees.begin(), degrees.end(), 0.0);
    mean_degree = total / static_cast<double>(degrees.size());
  }
}

DegreeSequence degree_sequence(const Graph& g) {
  std::vector<int> d(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId i = 0; i < g.num_nodes(); ++i) d[i] = g.degree(i);
  return DegreeSequence(std::move(d));
}

std::vector<std::int64_t> degree_distribution(const Graph& g) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(g.num_nodes()), 0);
  for (NodeId i = 0; i < g.num_nodes(); ++i) ++counts[g.degree(i)];
  return counts;
}

std::vector<int> shared_partner_matrix(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<int> sp(n * n, 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto& nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const auto x = static_cast<std::size_t>(nb[a]);
        const auto y = static_cast<std::size_t>(nb[b]);
        ++sp[x * n + y];
        ++sp[y * n + x];
      }
    }
  }
  return sp;
}

SharedPartnerDistributions shared_partner_distributions(const Graph& g) {
  const int n = g.num_nodes();
  const auto bins = static_cast<std::size_t>(std::max(n - 1, 0));
  SharedPartnerDistributions out;
  out.esp.assign(bins, 0);
  out.nsp.assign(bins, 0);
  out.dsp.assign(bins, 0);
  const auto sp = shared_partner_matrix(g);
  const auto un = static_cast<std::size_t>(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const int s = sp[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
      (g.has_edge(i, j) ? out.esp : out.nsp)[s] += 1;
      out.dsp[s] += 1;
    }
  }
  return out;
}

std::vector<int> connected_components(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

int giant_component_size(const Graph& g) {
  const auto comp = connected_components(g);
  std::vector<int> sizes;
  for (int c : comp) {
    if (c >= static_cast<int>(sizes.size())) sizes.resize(static_cast<std::size_t>(c) + 1, 0);
    ++sizes[c];
  }
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

bool is_graphical(std::span<const int> degrees) {
  std::vector<std::int64_t> d(degrees.begin(), degrees.end());
  const auto n = static_cast<std::int64_t>(d.size());
  std::int64_t total = 0;
  for (auto x : d) {
    if (x < 0 || x > n - 1) return false;
    total += x;
  }
  if (total % 2 != 0) return false;
  std::sort(d.begin(), d.end(), std::greater<>());
  std::int64_t lhs = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    lhs += d[k - 1];
    std::int64_t rhs = k * (k - 1);
    for (std::int64_t i = k; i < n; ++i) rhs += std::min(d[i], k);
    if (lhs > rhs) return false;
  }
  return true;
}

Graph havel_hakimi(std::span<const int> degrees) {
  if (degrees.empty()) throw SamplerError("empty degree sequence");
  if (!is_graphical(degrees)) throw SamplerError("degree sequence is not graphical (Erdos-Gallai)");
  const int n = static_cast<int>(degrees.size());
  Graph g(n);
  std::vector<int> residual(degrees.begin(), degrees.end());
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return residual[a] > residual[b]; });
    const NodeId v = order[0];
    const int need = residual[v];
    if (need == 0) break;
    residual[v] = 0;
    int placed = 0;
    for (std::size_t k = 1; k < order.size() && placed < need; ++k) {
      const NodeId w = order[k];
      if (residual[w] == 0) break;
      g.add_edge(v, w);
      --residual[w];
      ++placed;
    }
    if (placed < need) throw SamplerError("Havel-Hakimi realization failed");
  }
  return g;
}

}  // namespace brainergm
