#include "brainergm/gof.hpp"

#include <algorithm>
#include <cmath>

#include "brainergm/error.hpp"
#include "brainergm/metrics.hpp"

namespace brainergm {

std::string to_string(GofDiagnostic d) {
  switch (d) {
    case GofDiagnostic::Degree: return "degree";
    case GofDiagnostic::Esp: return "esp";
    case GofDiagnostic::Geodesic: return "geodesic";
    case GofDiagnostic::TriadCensus: return "triad_census";
    case GofDiagnostic::Nsp: return "nsp";
  }
  return "degree";
}

void GofConfig::validate() const {
  if (nsim < 2) throw ConfigError("nsim must be >= 2");
  sampler.validate();
}

const GofTable& GofReport::table(GofDiagnostic d) const {
  for (const auto& t : tables) {
    if (t.diagnostic == d) return t;
  }
  throw ConfigError("GOF report has no " + to_string(d) + " diagnostic");
}

std::vector<std::string> gof_bin_labels(int n, GofDiagnostic d) {
  std::vector<std::string> labels;
  switch (d) {
    case GofDiagnostic::Degree:
      for (int k = 0; k < n; ++k) labels.push_back(std::to_string(k));
      break;
    case GofDiagnostic::Esp:
    case GofDiagnostic::Nsp:
      for (int k = 0; k + 1 < n; ++k) labels.push_back(std::to_string(k));
      break;
    case GofDiagnostic::Geodesic:
      for (int k = 1; k < n; ++k) labels.push_back(std::to_string(k));
      labels.emplace_back("inf");
      break;
    case GofDiagnostic::TriadCensus:
      labels = {"0", "1", "2", "3"};
      break;
  }
  return labels;
}

std::vector<double> gof_counts(const Graph& g, GofDiagnostic d) {
  const int n = g.num_nodes();
  std::vector<double> out;
  auto copy = [&out](const std::vector<std::int64_t>& v) {
    out.assign(v.begin(), v.end());
  };
  switch (d) {
    case GofDiagnostic::Degree:
      copy(degree_distribution(g));
      break;
    case GofDiagnostic::Esp:
      copy(shared_partner_distributions(g).esp);
      break;
    case GofDiagnostic::Nsp:
      copy(shared_partner_distributions(g).nsp);
      break;
    case GofDiagnostic::Geodesic: {
      // Unordered pairs by distance 1..n-1, last bin unreachable.
      out.assign(static_cast<std::size_t>(std::max(n, 1)), 0.0);
      const auto dist = geodesic_distances(g);
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
          if (dist.reachable(i, j)) {
            out[static_cast<std::size_t>(dist(i, j) - 1)] += 1.0;
          } else {
            out.back() += 1.0;
          }
        }
      }
      break;
    }
    case GofDiagnostic::TriadCensus: {
      const auto t = triad_census(g);
      out = {static_cast<double>(t.empty), static_cast<double>(t.one_edge), static_cast<double>(t.two_path),
             static_cast<double>(t.triangle)};
      break;
    }
  }
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ConfigError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

GofReport gof_report(const Graph& g, const ModelSpec& model, const ThetaVector& theta, const GofConfig& config,
                     const NodeAttributes* attrs) {
  config.validate();
  if (g.num_nodes() < 3) throw MetricError("GOF needs n >= 3");
  SamplerConfig sc = config.sampler;
  sc.proposal = Proposal::Toggle;
  sc.init = InitState::Observed;
  sc.num_samples = static_cast<std::size_t>(config.nsim);
  sc.keep_graphs = true;
  const SampleSet set = sample_networks(model, theta, g.num_nodes(), sc, attrs, &g);

  std::vector<GofDiagnostic> kinds{GofDiagnostic::Degree, GofDiagnostic::Esp, GofDiagnostic::Geodesic,
                                   GofDiagnostic::TriadCensus};
  if (config.include_nsp) kinds.push_back(GofDiagnostic::Nsp);

  GofReport report;
  report.nsim = config.nsim;
  report.model = model;
  report.theta = theta;
  for (GofDiagnostic kind : kinds) {
    const auto labels = gof_bin_labels(g.num_nodes(), kind);
    const auto observed = gof_counts(g, kind);
    std::vector<std::vector<double>> per_bin(labels.size());
    for (const Graph& sim : set.graphs) {
      const auto counts = gof_counts(sim, kind);
      for (std::size_t b = 0; b < labels.size(); ++b) per_bin[b].push_back(counts[b]);
    }
    GofTable table;
    table.diagnostic = kind;
    for (std::size_t b = 0; b < labels.size(); ++b) {
      GofBin bin;
      bin.label = labels[b];
      bin.observed = observed[b];
      auto& v = per_bin[b];
      std::sort(v.begin(), v.end());
      bin.min = v.front();
      bin.q05 = quantile(v, 0.05);
      bin.q25 = quantile(v, 0.25);
      bin.median = quantile(v, 0.5);
      bin.q75 = quantile(v, 0.75);
      bin.q95 = quantile(v, 0.95);
      bin.max = v.back();
      table.bins.push_back(std::move(bin));
    }
    report.tables.push_back(std::move(table));
  }
  return report;
}

GofScore gof_score(const GofReport& report) {
  GofScore score;
  for (const auto& table : report.tables) {
    double sum = 0.0;
    int occupied = 0;
    for (const auto& bin : table.bins) {
      if (!bin.occupied()) continue;
      sum += std::abs(bin.observed - bin.median) / std::max(bin.q75 - bin.q25, 1.0);
      ++occupied;
    }
    const double part = occupied > 0 ? sum / occupied : 0.0;
    score.parts.emplace_back(table.diagnostic, part);
    score.total += part;
  }
  return score;
}

}  // namespace brainergm
