#include "brainergm/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "brainergm/error.hpp"

namespace brainergm {

namespace {

// Runs fn(0..count-1) on up to `jobs` threads. Results must be written by
// index; the first failure by index is rethrown after every task finished.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <class F>
auto run_stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, name + ": " + e.what());
  }
}

std::uint64_t subject_seed(std::uint64_t master, std::size_t i) { return derive_seed(master, 1000 * (i + 1)); }

}  // namespace

void SubjectSet::validate() const {
  if (subjects.empty()) throw DataError("no subjects");
  int n = -1;
  for (const auto& s : subjects) {
    if (!s.matrix && !s.graph) throw DataError("subject " + s.id + " has neither a matrix nor a graph");
    const int sn = s.graph ? s.graph->num_nodes() : s.matrix->size();
    if (s.matrix && s.graph && s.matrix->size() != s.graph->num_nodes()) {
      throw DataError("subject " + s.id + ": matrix and graph sizes differ");
    }
    if (n >= 0 && sn != n) {
      throw DataError("subject " + s.id + " has n=" + std::to_string(sn) + ", expected " + std::to_string(n));
    }
    n = sn;
  }
  if (attributes && static_cast<int>(attributes->labels.size()) != n) {
    throw DataError("attribute file has " + std::to_string(attributes->labels.size()) + " nodes, expected " +
                    std::to_string(n));
  }
}

int SubjectSet::num_nodes() const {
  validate();
  const auto& s = subjects.front();
  return s.graph ? s.graph->num_nodes() : s.matrix->size();
}

bool SubjectSet::has_matrices() const {
  return !subjects.empty() &&
         std::all_of(subjects.begin(), subjects.end(), [](const Subject& s) { return s.matrix.has_value(); });
}

ThetaVector group_theta(const std::vector<ThetaVector>& thetas, GroupMode mode) {
  if (thetas.empty()) throw ConfigError("no coefficient vectors to summarize");
  const auto p = thetas.front().size();
  for (const auto& t : thetas) {
    if (t.size() != p) throw DimensionError("coefficient vectors have different lengths");
  }
  ThetaVector out(p);
  std::vector<double> column(thetas.size());
  for (Eigen::Index k = 0; k < p; ++k) {
    for (std::size_t s = 0; s < thetas.size(); ++s) column[s] = thetas[s](k);
    out(k) = summarize(column, mode);
  }
  return out;
}

ThetaVector group_theta(const std::vector<SubjectFit>& fits, GroupMode mode) {
  if (fits.empty()) throw ConfigError("no subject fits to summarize");
  std::vector<ThetaVector> thetas;
  for (const auto& f : fits) {
    if (!(f.model == fits.front().model)) {
      throw PipelineError("summarize", "subject " + f.subject + " was fitted with " + f.model.label() + " but subject " +
                                           fits.front().subject + " with " + fits.front().model.label() +
                                           "; coefficients of different models cannot be combined");
    }
    thetas.push_back(f.fit.theta);
  }
  return group_theta(thetas, mode);
}

double degree_ks_distance(const Graph& a, const Graph& b) {
  const auto da = degree_distribution(a);
  const auto db = degree_distribution(b);
  const std::size_t len = std::max(da.size(), db.size());
  const double na = std::max(a.num_nodes(), 1);
  const double nb = std::max(b.num_nodes(), 1);
  double fa = 0.0;
  double fb = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    if (k < da.size()) fa += static_cast<double>(da[k]) / na;
    if (k < db.size()) fb += static_cast<double>(db[k]) / nb;
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

ReferenceChoice pick_reference_subject(const std::vector<std::string>& ids, const std::vector<Graph>& graphs) {
  if (ids.size() != graphs.size()) throw DimensionError("subject ids and graphs differ in number");
  if (graphs.size() < 2) throw DataError("choosing a reference subject needs at least two subjects");
  std::vector<ReferenceRank> ranks;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      if (j != i) total += degree_ks_distance(graphs[i], graphs[j]);
    }
    ranks.push_back({ids[i], total});
  }
  ReferenceChoice choice;
  choice.ranking = ranks;
  std::stable_sort(choice.ranking.begin(), choice.ranking.end(),
                   [](const ReferenceRank& a, const ReferenceRank& b) { return a.total_ks < b.total_ks; });
  choice.id = choice.ranking.front().id;
  choice.index = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), choice.id) - ids.begin());
  return choice;
}

SamplerConfig CandidateConfig::default_candidate_sampler() {
  SamplerConfig s;
  s.burn_in = 200'000;
  return s;
}

void CandidateConfig::validate() const {
  if (m < 1) throw ConfigError("candidate count m must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  sampler.validate();
}

std::string Candidate::name() const {
  return std::string(constrained ? "constrained_" : "unconstrained_") + to_string(family) + "_" +
         std::to_string(replicate);
}

std::vector<Candidate> generate_candidates(const ModelSpec& model, const ThetaVector& theta_mean,
                                           const ThetaVector& theta_median, int n,
                                           const DegreeSequence* constraint, const CandidateConfig& config,
                                           const NodeAttributes* attrs) {
  config.validate();
  std::vector<Candidate> out;
  for (bool constrained : {false, true}) {
    if (constrained && constraint == nullptr) break;
    for (GroupMode family : {GroupMode::Mean, GroupMode::Median}) {
      for (int r = 1; r <= config.m; ++r) {
        Candidate& c = out.emplace_back();
        c.index = out.size() - 1;
        c.family = family;
        c.constrained = constrained;
        c.replicate = r;
        c.seed = derive_seed(config.seed, c.index);
      }
    }
  }
  parallel_for(out.size(), config.jobs, [&](std::size_t k) {
    Candidate& c = out[k];
    SamplerConfig sc = config.sampler;
    sc.seed = c.seed;
    sc.num_samples = 1;
    sc.keep_graphs = true;
    const ThetaVector& theta = c.family == GroupMode::Mean ? theta_mean : theta_median;
    try {
      if (c.constrained) {
        sc.proposal = Proposal::DegreeSwap;
        c.graph = sample_degree_constrained(model, theta, *constraint, sc, attrs).graphs.front();
      } else {
        sc.proposal = Proposal::Toggle;
        sc.init = InitState::Empty;
        c.graph = sample_networks(model, theta, n, sc, attrs).graphs.front();
      }
    } catch (const Error& e) {
      c.error = e.what();
    }
  });
  return out;
}

std::string to_string(RowKind k) {
  switch (k) {
    case RowKind::Subject: return "subject";
    case RowKind::Reference: return "reference";
    case RowKind::EdgeBased: return "edge_based";
    case RowKind::Candidate: return "candidate";
  }
  return "candidate";
}

ReferenceProfiles reference_profiles(const std::vector<MetricProfile>& subjects, const std::vector<std::string>& ids) {
  if (subjects.empty()) throw DataError("no subject profiles");
  std::vector<std::array<double, 7>> values;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    values.push_back(subjects[s].as_array(s < ids.size() ? "subject " + ids[s] : "subject " + std::to_string(s)));
  }
  std::array<double, 7> mean{};
  std::array<double, 7> median{};
  std::vector<double> column(values.size());
  for (std::size_t k = 0; k < 7; ++k) {
    for (std::size_t s = 0; s < values.size(); ++s) column[s] = values[s][k];
    mean[k] = summarize(column, GroupMode::Mean);
    median[k] = summarize(column, GroupMode::Median);
  }
  return {MetricProfile::from_array(mean), MetricProfile::from_array(median)};
}

double profile_distance(const MetricProfile& a, const MetricProfile& reference, bool include_k,
                        const std::string& owner) {
  const auto x = a.as_array(owner);
  const auto y = reference.as_array("the reference profile");
  double sum = 0.0;
  for (std::size_t k = 0; k < 7; ++k) {
    if (k == 2 && !include_k) continue;
    sum += (x[k] - y[k]) * (x[k] - y[k]);
  }
  return std::sqrt(sum);
}

const AssessmentRow& AssessmentTable::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.entry.name == name) return r;
  }
  throw ConfigError("assessment has no row '" + name + "'");
}

AssessmentTable assess_profiles(const ReferenceProfiles& references, const std::vector<ProfileEntry>& entries) {
  AssessmentTable table;
  table.references = references;
  auto better = [&table](const std::optional<std::size_t>& current, std::size_t candidate) {
    if (!current) return true;
    return *table.rows[candidate].distance < *table.rows[*current].distance;
  };
  for (const auto& e : entries) {
    AssessmentRow row;
    row.entry = e;
    const bool scored = e.kind == RowKind::EdgeBased || e.kind == RowKind::Candidate;
    if (scored && e.profile) {
      const MetricProfile& ref = e.family == GroupMode::Mean ? references.mean : references.median;
      row.distance = profile_distance(*e.profile, ref, true, e.name);
      row.distance_without_k = profile_distance(*e.profile, ref, false, e.name);
    }
    table.rows.push_back(std::move(row));
    const std::size_t idx = table.rows.size() - 1;
    if (e.kind != RowKind::Candidate || !table.rows[idx].distance) continue;
    auto& family_best = e.family == GroupMode::Mean ? table.best_mean_candidate : table.best_median_candidate;
    if (better(family_best, idx)) family_best = idx;
    if (better(table.best_candidate, idx)) table.best_candidate = idx;
  }
  return table;
}

AssessmentTable assess_candidates(const std::vector<Candidate>& candidates, const std::vector<std::string>& subject_ids,
                                  const std::vector<Graph>& subject_graphs,
                                  const std::vector<EdgeBasedNetwork>& edge_based) {
  if (subject_ids.size() != subject_graphs.size()) throw DimensionError("subject ids and graphs differ in number");
  if (subject_graphs.empty()) throw DataError("assessment needs at least one subject");
  const int n = subject_graphs.front().num_nodes();
  auto check_n = [n](const Graph& g, const std::string& name) {
    if (g.num_nodes() != n) {
      throw DataError(name + " has n=" + std::to_string(g.num_nodes()) + ", expected " + std::to_string(n));
    }
  };

  std::vector<ProfileEntry> entries;
  std::vector<MetricProfile> subject_profiles;
  for (std::size_t s = 0; s < subject_graphs.size(); ++s) {
    check_n(subject_graphs[s], "subject " + subject_ids[s]);
    subject_profiles.push_back(metric_profile(subject_graphs[s]));
    ProfileEntry e;
    e.name = subject_ids[s];
    e.kind = RowKind::Subject;
    e.profile = subject_profiles.back();
    entries.push_back(std::move(e));
  }
  const ReferenceProfiles refs = reference_profiles(subject_profiles, subject_ids);
  for (GroupMode family : {GroupMode::Mean, GroupMode::Median}) {
    ProfileEntry e;
    e.name = "subject_" + to_string(family);
    e.kind = RowKind::Reference;
    e.family = family;
    e.profile = family == GroupMode::Mean ? refs.mean : refs.median;
    entries.push_back(std::move(e));
  }
  for (const auto& net : edge_based) {
    check_n(net.graph, net.name());
    ProfileEntry e;
    e.name = net.name();
    e.kind = RowKind::EdgeBased;
    e.family = net.family;
    e.profile = metric_profile(net.graph);
    entries.push_back(std::move(e));
  }
  for (const auto& c : candidates) {
    ProfileEntry e;
    e.name = c.name();
    e.kind = RowKind::Candidate;
    e.family = c.family;
    e.constrained = c.constrained;
    e.candidate = c.index;
    if (c.ok()) {
      check_n(*c.graph, c.name());
      e.profile = metric_profile(*c.graph);
    } else {
      e.status = "failed: " + c.error;
    }
    entries.push_back(std::move(e));
  }
  return assess_profiles(refs, entries);
}

std::string to_string(ModelSource s) { return s == ModelSource::Fixed ? "fixed" : "select"; }

ModelSource model_source_from_string(const std::string& s) {
  if (s == "fixed") return ModelSource::Fixed;
  if (s == "select") return ModelSource::Select;
  throw ConfigError("unknown model source '" + s + "' (expected fixed or select)");
}

void PipelineConfig::validate() const {
  threshold.validate();
  group_threshold.validate();
  if (model_source == ModelSource::Fixed && model.empty()) throw ConfigError("fixed model has no terms");
  estimator.validate();
  if (model_source == ModelSource::Select) {
    selection.estimator.validate();
    selection.gof.validate();
  }
  if (gof) gof_config.validate();
  candidates.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

PipelineResult run_pipeline(const SubjectSet& set, const PipelineConfig& config) {
  run_stage("config", [&] {
    config.validate();
    set.validate();
    if (set.subjects.size() < 2) throw DataError("the pipeline needs at least two subjects");
  });
  const NodeAttributes* attrs = set.attributes ? &*set.attributes : nullptr;
  const std::size_t count = set.subjects.size();
  PipelineResult result;

  run_stage("threshold", [&] {
    for (const auto& s : set.subjects) {
      result.subject_ids.push_back(s.id);
      result.subject_graphs.push_back(s.graph ? *s.graph : threshold(*s.matrix, config.threshold));
    }
    if (set.has_matrices()) {
      std::vector<CorrelationMatrix> matrices;
      for (const auto& s : set.subjects) matrices.push_back(*s.matrix);
      for (GroupMode family : {GroupMode::Mean, GroupMode::Median}) {
        result.edge_based.push_back({family, group_correlation_network(matrices, family, config.group_threshold)});
      }
    }
  });

  if (config.model_source == ModelSource::Select) {
    run_stage("selection", [&] {
      result.selections.resize(count);
      parallel_for(count, config.jobs, [&](std::size_t i) {
        SelectionConfig sc = config.selection;
        sc.estimator.seed = subject_seed(config.seed, i);
        sc.gof.sampler.seed = subject_seed(config.seed, i) + 500;
        try {
          result.selections[i] = select_model(result.subject_graphs[i], attrs, sc);
        } catch (const Error& e) {
          throw SelectionError("subject " + result.subject_ids[i] + ": " + e.what());
        }
      });
      std::vector<ModelSpec> best;
      for (const auto& s : result.selections) best.push_back(s.model);
      result.group_model = derive_group_model(best, &result.prevalence);
    });
  } else {
    result.group_model = config.model;
  }

  run_stage("fit", [&] {
    result.fits.resize(count);
    parallel_for(count, config.jobs, [&](std::size_t i) {
      EstimatorConfig ec = config.estimator;
      ec.seed = subject_seed(config.seed, i);
      SubjectFit& f = result.fits[i];
      f.subject = result.subject_ids[i];
      f.model = result.group_model;
      try {
        f.fit = fit(result.subject_graphs[i], result.group_model, ec, attrs);
      } catch (const Error& e) {
        throw EstimationError("subject " + f.subject + ": " + e.what());
      }
      if (!f.fit.converged) {
        throw EstimationError("subject " + f.subject + ": fit did not converge (" + f.fit.message + ")");
      }
    });
  });

  if (config.gof) {
    run_stage("gof", [&] {
      result.gof_reports.resize(count);
      parallel_for(count, config.jobs, [&](std::size_t i) {
        GofConfig gc = config.gof_config;
        gc.sampler.seed = subject_seed(config.seed, i) + 500;
        result.gof_reports[i] =
            gof_report(result.subject_graphs[i], result.group_model, result.fits[i].fit.theta, gc, attrs);
      });
    });
  }

  run_stage("summarize", [&] {
    result.theta_mean = group_theta(result.fits, GroupMode::Mean);
    result.theta_median = group_theta(result.fits, GroupMode::Median);
  });

  run_stage("reference", [&] { result.reference = pick_reference_subject(result.subject_ids, result.subject_graphs); });

  run_stage("candidates", [&] {
    CandidateConfig cc = config.candidates;
    cc.seed = config.seed;
    cc.jobs = config.jobs;
    const DegreeSequence constraint = degree_sequence(result.subject_graphs[result.reference.index]);
    result.candidates = generate_candidates(result.group_model, result.theta_mean, result.theta_median,
                                            result.subject_graphs.front().num_nodes(),
                                            config.constrained ? &constraint : nullptr, cc, attrs);
  });

  run_stage("assess", [&] {
    result.assessment =
        assess_candidates(result.candidates, result.subject_ids, result.subject_graphs, result.edge_based);
    if (!result.assessment.best_candidate) throw PipelineError("assess", "assess: every candidate simulation failed");
    result.representative = *result.assessment.rows[*result.assessment.best_candidate].entry.candidate;
  });
  return result;
}

SubjectSet synthetic_subjects(const SyntheticGroupConfig& config, bool keep_graphs) {
  if (config.subjects < 1) throw ConfigError("synthetic group needs at least one subject");
  if (config.theta.size() != static_cast<Eigen::Index>(config.model.size())) {
    throw DimensionError("theta has " + std::to_string(config.theta.size()) + " entries for a " +
                         std::to_string(config.model.size()) + "-term model");
  }
  if (!(config.shared >= 0.0 && config.shared <= 1.0)) throw ConfigError("shared noise fraction must lie in [0, 1]");
  const int n = config.n;
  Rng common_rng(derive_seed(config.seed, 1'000'000));
  Eigen::MatrixXd common = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) common(i, j) = common_rng.normal();

  const double a = std::sqrt(config.shared);
  const double b = std::sqrt(1.0 - config.shared);
  SubjectSet set;
  for (int s = 0; s < config.subjects; ++s) {
    SamplerConfig sc = config.sampler;
    sc.seed = derive_seed(config.seed, static_cast<std::uint64_t>(s));
    sc.num_samples = 1;
    sc.keep_graphs = true;
    sc.init = InitState::Empty;
    sc.proposal = Proposal::Toggle;
    const Graph g = sample_networks(config.model, config.theta, n, sc).graphs.front();
    Rng own(derive_seed(config.seed, 1'000'001 + static_cast<std::uint64_t>(s)));
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double noise = config.noise_sd * (a * common(i, j) + b * own.normal());
        const double v = std::clamp(config.signal * (g.has_edge(i, j) ? 1.0 : 0.0) + noise, -1.0, 1.0);
        m(i, j) = m(j, i) = v;
      }
    }
    Subject subject;
    char id[16];
    std::snprintf(id, sizeof id, "s%02d", s + 1);
    subject.id = id;
    subject.matrix = CorrelationMatrix(std::move(m));
    if (keep_graphs) subject.graph = g;
    set.subjects.push_back(std::move(subject));
  }
  return set;
}

}  // namespace brainergm
