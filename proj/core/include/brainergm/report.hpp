#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "brainergm/estimator.hpp"
#include "brainergm/gof.hpp"
#include "brainergm/metrics.hpp"
#include "brainergm/pipeline.hpp"
#include "brainergm/selection.hpp"

namespace brainergm {

using Json = nlohmann::ordered_json;

Json to_json(const MetricProfile& p);
Json to_json(const ModelSpec& model);
Json to_json(const ModelSpec& model, const FitResult& fit);
Json to_json(const GofReport& report);
Json to_json(const GofScore& score);
Json to_json(const SelectionResult& selection);
Json to_json(const AssessmentTable& table);
Json to_json(const ReferenceChoice& choice);

/// network,kind,family,constrained,N_c,L,K,C,E_loc,E_glob,R,distance,distance_without_K,status
void write_assessment_csv(const AssessmentTable& table, std::ostream& out);

/// diagnostic,bin,observed,min,q05,q25,median,q75,q95,max
void write_gof_csv(const GofReport& report, std::ostream& out);

/// One MetricProfile per line under the kMetricNames header, "NA" when undefined.
void write_profiles_csv(const std::vector<std::pair<std::string, MetricProfile>>& rows, std::ostream& out);

using NamedGraph = std::pair<std::string, const Graph*>;

/// network,degree,count,fraction
void write_degree_distributions_csv(const std::vector<NamedGraph>& graphs, std::ostream& out);

/// network,metric,value,cumulative with metric in {L, C, E_glob, E_loc}.
void write_nodal_cdfs_csv(const std::vector<NamedGraph>& graphs, std::ostream& out);

/// Writes every pipeline artifact under `dir` and returns the written paths
/// relative to it, in writing order:
///   summary.json, assessment.csv, degree_distributions.csv, nodal_cdfs.csv,
///   gof/<subject>.csv, networks/<name>.edges, representative.edges
std::vector<std::string> write_pipeline_outputs(const PipelineResult& result, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace brainergm
