#pragma once

#include <string>
#include <vector>

#include "brainergm/graph.hpp"
#include "brainergm/sampler.hpp"
#include "brainergm/terms.hpp"

namespace brainergm {

enum class GofDiagnostic { Degree, Esp, Geodesic, TriadCensus, Nsp };

std::string to_string(GofDiagnostic d);

struct GofBin {
  std::string label;  // "0", "1", ..., "inf" for unreachable pairs
  double observed = 0.0;
  double min = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  double max = 0.0;

  bool occupied() const { return observed != 0.0 || max != 0.0; }
};

struct GofTable {
  GofDiagnostic diagnostic = GofDiagnostic::Degree;
  std::vector<GofBin> bins;
};

struct GofConfig {
  int nsim = 100;
  // Simulation starts at the observed graph; num_samples and init are overridden.
  SamplerConfig sampler;
  bool include_nsp = false;

  void validate() const;
};

struct GofReport {
  std::vector<GofTable> tables;
  int nsim = 0;
  ModelSpec model;
  ThetaVector theta;

  const GofTable& table(GofDiagnostic d) const;
};

/// Per-graph counts for one diagnostic, bins as in GofReport.
std::vector<double> gof_counts(const Graph& g, GofDiagnostic d);
std::vector<std::string> gof_bin_labels(int n, GofDiagnostic d);

/// Type-7 (linear interpolation) sample quantile, p in [0, 1].
double quantile(std::vector<double> values, double p);

GofReport gof_report(const Graph& g, const ModelSpec& model, const ThetaVector& theta, const GofConfig& config,
                     const NodeAttributes* attrs = nullptr);

struct GofScore {
  std::vector<std::pair<GofDiagnostic, double>> parts;
  double total = 0.0;
};

/// Per diagnostic, the mean over occupied bins of |observed - median| / max(IQR, 1);
/// the total sums the diagnostics. Lower is better.
GofScore gof_score(const GofReport& report);

}  // namespace brainergm
