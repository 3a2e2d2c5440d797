#pragma once

#include <array>
#include <string>
#include <vector>

#include "brainergm/correlation.hpp"
#include "brainergm/metrics.hpp"
#include "brainergm/pipeline.hpp"

namespace brainergm::testing {

// Per-subject (edges, gwesp, gwnsp) estimates of the ten-subject study.
inline const std::vector<std::array<double, 3>> kSubjectThetas = {
    {-2.562, 0.966, -0.293}, {-1.842, 0.745, -0.329}, {-2.789, 1.016, -0.279}, {-3.367, 1.311, -0.266},
    {-3.287, 1.092, -0.180}, {-3.666, 1.335, -0.204}, {-2.549, 0.973, -0.266}, {-2.791, 1.044, -0.301},
    {-2.525, 0.951, -0.308}, {-2.316, 0.704, -0.365},
};
inline constexpr std::array<double, 3> kThetaMean = {-2.769, 1.014, -0.279};
inline constexpr std::array<double, 3> kThetaMedian = {-2.676, 0.994, -0.286};

inline const MetricProfile kSubjectMeanProfile = MetricProfile::from_array({83.7, 4.14, 5.05, 0.40, 0.49, 0.28, 0.29});
inline const MetricProfile kSubjectMedianProfile =
    MetricProfile::from_array({84.5, 4.18, 5.04, 0.41, 0.49, 0.28, 0.30});

struct StudyRow {
  std::string name;
  RowKind kind;
  GroupMode family;
  bool constrained;
  std::array<double, 7> metrics;
  double distance;
  double distance_without_k;
};

// Rounded metric rows with their distances to the subject profile of
// the same family.
inline const std::vector<StudyRow> kStudyRows = {
    {"edge_based_mean", RowKind::EdgeBased, GroupMode::Mean, false, {89, 3.54, 6.42, 0.44, 0.55, 0.35, 0.33}, 5.51, 5.33},
    {"unconstrained_mean_1", RowKind::Candidate, GroupMode::Mean, false, {85, 4.48, 4.09, 0.37, 0.45, 0.26, 0.11}, 1.66, 1.36},
    {"unconstrained_mean_2", RowKind::Candidate, GroupMode::Mean, false, {85, 3.63, 4.58, 0.35, 0.44, 0.30, 0.09}, 1.49, 1.41},
    {"unconstrained_mean_3", RowKind::Candidate, GroupMode::Mean, false, {83, 4.12, 3.76, 0.39, 0.45, 0.26, 0.12}, 1.48, 0.72},
    {"unconstrained_mean_4", RowKind::Candidate, GroupMode::Mean, false, {88, 4.28, 4.27, 0.45, 0.52, 0.29, 0.02}, 4.38, 4.31},
    {"unconstrained_mean_5", RowKind::Candidate, GroupMode::Mean, false, {83, 4.59, 3.84, 0.40, 0.47, 0.24, 0.20}, 1.47, 0.84},
    {"unconstrained_median_1", RowKind::Candidate, GroupMode::Median, false, {86, 3.93, 4.62, 0.34, 0.41, 0.30, 0.40}, 1.58, 1.53},
    {"unconstrained_median_2", RowKind::Candidate, GroupMode::Median, false, {87, 4.48, 4.31, 0.42, 0.51, 0.27, 0.20}, 2.63, 2.52},
    {"unconstrained_median_3", RowKind::Candidate, GroupMode::Median, false, {86, 4.35, 4.64, 0.42, 0.49, 0.28, 0.39}, 1.57, 1.51},
    {"unconstrained_median_4", RowKind::Candidate, GroupMode::Median, false, {86, 3.83, 4.71, 0.36, 0.46, 0.30, 0.33}, 1.58, 1.54},
    {"unconstrained_median_5", RowKind::Candidate, GroupMode::Median, false, {78, 4.72, 3.78, 0.43, 0.49, 0.22, 0.20}, 6.65, 6.52},
    {"constrained_mean_1", RowKind::Candidate, GroupMode::Mean, true, {83, 4.43, 5.04, 0.45, 0.56, 0.26, 0.47}, 0.79, 0.79},
    {"constrained_mean_2", RowKind::Candidate, GroupMode::Mean, true, {83, 5.51, 5.04, 0.43, 0.51, 0.23, 0.61}, 1.57, 1.57},
    {"constrained_mean_3", RowKind::Candidate, GroupMode::Mean, true, {81, 6.35, 5.04, 0.46, 0.56, 0.21, 0.42}, 3.50, 3.50},
    {"constrained_mean_4", RowKind::Candidate, GroupMode::Mean, true, {83, 4.26, 5.04, 0.40, 0.49, 0.27, 0.55}, 0.76, 0.76},
    {"constrained_mean_5", RowKind::Candidate, GroupMode::Mean, true, {84, 4.30, 5.04, 0.34, 0.45, 0.27, 0.57}, 0.45, 0.45},
    {"constrained_median_1", RowKind::Candidate, GroupMode::Median, true, {86, 5.21, 5.04, 0.39, 0.48, 0.25, 0.59}, 1.85, 1.85},
    {"constrained_median_2", RowKind::Candidate, GroupMode::Median, true, {86, 4.32, 5.04, 0.34, 0.43, 0.28, 0.62}, 1.54, 1.54},
    {"constrained_median_3", RowKind::Candidate, GroupMode::Median, true, {83, 5.17, 5.04, 0.44, 0.52, 0.24, 0.46}, 1.81, 1.81},
    {"constrained_median_4", RowKind::Candidate, GroupMode::Median, true, {84, 4.16, 5.04, 0.37, 0.47, 0.28, 0.49}, 0.54, 0.54},
    {"constrained_median_5", RowKind::Candidate, GroupMode::Median, true, {83, 4.63, 5.04, 0.40, 0.51, 0.26, 0.47}, 1.57, 1.57},
};

inline std::vector<ProfileEntry> study_entries() {
  std::vector<ProfileEntry> entries;
  std::size_t candidate = 0;
  for (const auto& row : kStudyRows) {
    ProfileEntry e;
    e.name = row.name;
    e.kind = row.kind;
    e.family = row.family;
    e.constrained = row.constrained;
    if (row.kind == RowKind::Candidate) e.candidate = candidate++;
    e.profile = MetricProfile::from_array(row.metrics);
    entries.push_back(std::move(e));
  }
  return entries;
}

inline ReferenceProfiles study_references() { return {kSubjectMeanProfile, kSubjectMedianProfile}; }

}  // namespace brainergm::testing
