#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brainergm/correlation.hpp"
#include "brainergm/estimator.hpp"
#include "brainergm/gof.hpp"
#include "brainergm/metrics.hpp"
#include "brainergm/sampler.hpp"
#include "brainergm/selection.hpp"

namespace brainergm {

struct Subject {
  std::string id;
  std::optional<CorrelationMatrix> matrix;
  // Used as is when present; otherwise the thresholded matrix.
  std::optional<Graph> graph;
};

struct SubjectSet {
  std::vector<Subject> subjects;
  std::optional<NodeAttributes> attributes;

  /// Throws DataError when empty, when a subject has neither matrix nor graph,
  /// or when subjects disagree on n.
  void validate() const;
  int num_nodes() const;
  bool has_matrices() const;
};

/// Element-wise mean or median of per-subject coefficient vectors.
ThetaVector group_theta(const std::vector<ThetaVector>& thetas, GroupMode mode);

struct SubjectFit {
  std::string subject;
  ModelSpec model;
  FitResult fit;
};

/// As above; throws PipelineError when the fits use different models.
ThetaVector group_theta(const std::vector<SubjectFit>& fits, GroupMode mode);

/// max_k |F_a(k) - F_b(k)| between the empirical degree CDFs.
double degree_ks_distance(const Graph& a, const Graph& b);

struct ReferenceRank {
  std::string id;
  double total_ks = 0.0;
};

struct ReferenceChoice {
  std::size_t index = 0;
  std::string id;
  // Subjects by increasing total KS distance; ties keep input order.
  std::vector<ReferenceRank> ranking;
};

/// Subject whose degree distribution has the smallest summed KS distance to
/// every other subject; ties go to the earlier subject.
ReferenceChoice pick_reference_subject(const std::vector<std::string>& ids, const std::vector<Graph>& graphs);

struct CandidateConfig {
  int m = 5;
  SamplerConfig sampler = default_candidate_sampler();
  std::uint64_t seed = 0;
  int jobs = 1;

  static SamplerConfig default_candidate_sampler();
  void validate() const;
};

struct Candidate {
  std::size_t index = 0;
  GroupMode family = GroupMode::Mean;
  bool constrained = false;
  int replicate = 0;  // 1..m within its family
  std::uint64_t seed = 0;
  std::optional<Graph> graph;
  std::string error;  // empty when the simulation succeeded

  bool ok() const { return graph.has_value(); }
  /// e.g. "unconstrained_mean_3".
  std::string name() const;
};

/// m networks from theta_mean and m from theta_median, then the same again
/// under the degree constraint when one is given. Candidate k uses seed
/// config.seed + k. Failed simulations are kept with their error message.
std::vector<Candidate> generate_candidates(const ModelSpec& model, const ThetaVector& theta_mean,
                                           const ThetaVector& theta_median, int n,
                                           const DegreeSequence* constraint, const CandidateConfig& config,
                                           const NodeAttributes* attrs = nullptr);

enum class RowKind { Subject, Reference, EdgeBased, Candidate };

std::string to_string(RowKind k);

struct ReferenceProfiles {
  MetricProfile mean;
  MetricProfile median;
};

/// Metric-wise mean and median over subjects. Throws MetricError naming the
/// subject when one of its metrics is undefined.
ReferenceProfiles reference_profiles(const std::vector<MetricProfile>& subjects,
                                     const std::vector<std::string>& ids);

/// Euclidean distance over (N_c, L, K, C, E_loc, E_glob, R), optionally without K.
double profile_distance(const MetricProfile& a, const MetricProfile& reference, bool include_k,
                        const std::string& owner = "network");

struct ProfileEntry {
  std::string name;
  RowKind kind = RowKind::Candidate;
  GroupMode family = GroupMode::Mean;
  bool constrained = false;
  std::optional<std::size_t> candidate;
  std::optional<MetricProfile> profile;  // empty for failed candidates
  std::string status = "ok";
};

struct AssessmentRow {
  ProfileEntry entry;
  std::optional<double> distance;
  std::optional<double> distance_without_k;
};

struct AssessmentTable {
  ReferenceProfiles references;
  std::vector<AssessmentRow> rows;
  // Row indices of the closest candidate per family and overall.
  std::optional<std::size_t> best_mean_candidate;
  std::optional<std::size_t> best_median_candidate;
  std::optional<std::size_t> best_candidate;

  const AssessmentRow& row(const std::string& name) const;
};

/// Distances of edge-based and candidate entries to the reference of their
/// family; subject and reference entries are listed without distances.
AssessmentTable assess_profiles(const ReferenceProfiles& references, const std::vector<ProfileEntry>& entries);

struct EdgeBasedNetwork {
  GroupMode family = GroupMode::Mean;
  Graph graph;

  std::string name() const { return "edge_based_" + to_string(family); }
};

AssessmentTable assess_candidates(const std::vector<Candidate>& candidates, const std::vector<std::string>& subject_ids,
                                  const std::vector<Graph>& subject_graphs,
                                  const std::vector<EdgeBasedNetwork>& edge_based);

enum class ModelSource { Fixed, Select };

std::string to_string(ModelSource s);
ModelSource model_source_from_string(const std::string& s);

struct PipelineConfig {
  ThresholdConfig threshold;        // subject networks
  ThresholdConfig group_threshold;  // edge-based mean / median networks
  ModelSource model_source = ModelSource::Fixed;
  ModelSpec model = ModelSpec::group_default();
  SelectionConfig selection;
  EstimatorConfig estimator;
  bool gof = true;
  GofConfig gof_config;
  CandidateConfig candidates;
  bool constrained = true;
  // Seeds: candidate k uses seed + k, subject i's fit and selection use
  // seed + 1000 (i + 1), its GOF simulation seed + 1000 (i + 1) + 500.
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

struct PipelineResult {
  std::vector<std::string> subject_ids;
  std::vector<Graph> subject_graphs;
  std::vector<EdgeBasedNetwork> edge_based;
  ModelSpec group_model;
  std::vector<SelectionResult> selections;  // empty for a fixed model
  std::vector<TermPrevalence> prevalence;
  std::vector<SubjectFit> fits;
  std::vector<GofReport> gof_reports;
  ThetaVector theta_mean;
  ThetaVector theta_median;
  ReferenceChoice reference;
  std::vector<Candidate> candidates;
  AssessmentTable assessment;
  std::size_t representative = 0;  // index into candidates

  const Graph& representative_graph() const { return *candidates[representative].graph; }
};

/// Thresholds the subjects, derives or takes the group model, fits every
/// subject, summarizes theta, picks the degree reference, simulates and
/// assesses candidates. Errors are rethrown as PipelineError labeled with the
/// failing stage; a subject fit that does not converge aborts the run.
PipelineResult run_pipeline(const SubjectSet& set, const PipelineConfig& config);

struct SyntheticGroupConfig {
  ModelSpec model = ModelSpec::group_default();
  ThetaVector theta;
  int n = 90;
  int subjects = 10;
  // Entry (i, j) of subject s: signal * y_ij + noise_sd * (sqrt(shared) z_ij + sqrt(1 - shared) e_sij),
  // with z shared across subjects; clamped to [-1, 1].
  double signal = 0.5;
  double noise_sd = 0.15;
  double shared = 0.5;
  std::uint64_t seed = 0;
  SamplerConfig sampler;
};

/// Subjects "s01", "s02", ... whose matrices are noisy images of independent
/// networks simulated from the model. Each subject also carries its simulated
/// network as `graph` only when keep_graphs is set.
SubjectSet synthetic_subjects(const SyntheticGroupConfig& config, bool keep_graphs = false);

}  // namespace brainergm
