#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brainergm/estimator.hpp"
#include "brainergm/gof.hpp"
#include "brainergm/terms.hpp"

namespace brainergm {

struct SelectionConfig {
  EstimatorConfig estimator;
  GofConfig gof;
  double tau = kDefaultDecay;
  // Nodematch attribute offered in step 4.
  std::string attribute;
};

struct CandidateRecord {
  int step = 0;
  ModelSpec model;
  bool usable = false;
  std::string status;  // "ok", "not converged: ...", "degenerate: ...", "error: ..."
  std::optional<FitResult> fit;
  std::optional<double> score;
  bool chosen = false;
};

struct SelectionResult {
  ModelSpec model;
  FitResult fit;
  double score = 0.0;
  std::vector<CandidateRecord> audit;
};

/// Four-step search:
///   1. {edges | two-path} + gwesp + gwdsp + gwnsp + gwd, keep the connectedness term;
///   2. C + {gwesp | gwdsp} + gwnsp + gwd, keep the local-efficiency term;
///   3. the four-term model of step 2 against its four three-term submodels;
///   4. add nodematch, kept only if the GOF score improves (skipped without attributes).
/// Candidates that fail to converge or are degenerate are excluded from their
/// comparison; exact score ties go to the model with fewer terms. Throws
/// SelectionError when every candidate of a step fails.
SelectionResult select_model(const Graph& g, const NodeAttributes* attrs, const SelectionConfig& config);

/// Usable candidate with the lowest score; exact ties go to fewer terms, then
/// to the earlier candidate. Throws SelectionError when none is usable.
std::size_t best_candidate(const std::vector<CandidateRecord>& records);

struct TermPrevalence {
  TermSpec term;
  int count = 0;
};

/// Terms contained in at least half of the given models, in canonical order.
/// Connectedness (edges / two-path) and local-efficiency (gwesp / gwdsp)
/// alternatives are exclusive: when both qualify the more prevalent one is
/// kept, ties going to edges and gwesp.
ModelSpec derive_group_model(const std::vector<ModelSpec>& best_models,
                             std::vector<TermPrevalence>* prevalence = nullptr);

}  // namespace brainergm
