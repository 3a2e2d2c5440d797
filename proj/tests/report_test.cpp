#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "brainergm/error.hpp"
#include "brainergm/graph_io.hpp"
#include "brainergm/numfmt.hpp"
#include "brainergm/report.hpp"
#include "study_rows.hpp"
#include "test_support.hpp"

using namespace brainergm;
using namespace brainergm::testing;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      const char c = line[k];
      if (quoted) {
        if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
          cell += '"';
          ++k;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("brainergm_report_test_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineResult small_run(std::uint64_t seed) {
  SyntheticGroupConfig g;
  g.theta = ThetaVector(3);
  g.theta << -2.7, 1.0, -0.3;
  g.n = 30;
  g.subjects = 3;
  g.seed = 12;
  g.sampler.burn_in = 30'000;
  PipelineConfig cfg;
  cfg.seed = seed;
  cfg.estimator.sample_size = 2048;
  cfg.estimator.interval = 128;
  cfg.estimator.burn_in = 20'000;
  cfg.gof_config.nsim = 20;
  cfg.gof_config.sampler.burn_in = 10'000;
  cfg.gof_config.sampler.thin = 1'000;
  cfg.candidates.m = 2;
  cfg.candidates.sampler.burn_in = 20'000;
  return run_pipeline(synthetic_subjects(g), cfg);
}

}  // namespace

TEST(NumberFormat, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(225.0), "225");
  EXPECT_EQ(format_number(std::optional<double>{}), "NA");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
}

TEST(ProfilesCsv, TriangleHasUndefinedAssortativity) {
  std::ostringstream out;
  write_profiles_csv({{"k3", metric_profile(complete_graph(3))}, {"a,b", metric_profile(path_graph(3))}}, out);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "network,N_c,L,K,C,E_loc,E_glob,R");
  EXPECT_EQ(rows[1], (std::vector<std::string>{"k3", "3", "1", "2", "1", "1", "1", "NA"}));
  EXPECT_EQ(rows[2][0], "a,b");
  EXPECT_EQ(rows[2][2], "1.2");
}

TEST(ProfilesJson, NullForUndefinedMetrics) {
  const Json j = to_json(metric_profile(complete_graph(3)));
  EXPECT_TRUE(j["R"].is_null());
  EXPECT_DOUBLE_EQ(j["L"].get<double>(), 1.0);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"N_c", "L", "K", "C", "E_loc", "E_glob", "R"}));
}

TEST(AssessmentCsv, StudyRowsRoundTrip) {
  const AssessmentTable table = assess_profiles(study_references(), study_entries());
  std::ostringstream out;
  write_assessment_csv(table, out);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), kStudyRows.size() + 1);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"network", "kind", "family", "constrained", "N_c", "L", "K", "C", "E_loc",
                                               "E_glob", "R", "distance", "distance_without_K", "status"}));
  for (std::size_t k = 0; k < kStudyRows.size(); ++k) {
    const auto& r = rows[k + 1];
    ASSERT_EQ(r.size(), 14u);
    EXPECT_EQ(r[0], kStudyRows[k].name);
    EXPECT_EQ(std::stod(r[11]), *table.rows[k].distance);
    EXPECT_EQ(std::stod(r[12]), *table.rows[k].distance_without_k);
    EXPECT_EQ(r[13], "ok");
  }
  EXPECT_EQ(rows[1][1], "edge_based");
  EXPECT_EQ(rows[1][3], "");
  EXPECT_EQ(rows[16][3], "true");

  const Json j = to_json(table);
  EXPECT_EQ(j["best_candidate"], "constrained_mean_5");
  EXPECT_EQ(j["rows"].size(), kStudyRows.size());
}

TEST(DegreeCsv, CountsAndFractions) {
  const Graph star = star_graph(5);
  std::ostringstream out;
  write_degree_distributions_csv({{"star", &star}}, out);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[2], (std::vector<std::string>{"star", "1", "4", "0.8"}));
  EXPECT_EQ(rows[5], (std::vector<std::string>{"star", "4", "1", "0.2"}));
}

TEST(NodalCsv, EveryCdfEndsAtOne) {
  Rng rng(6);
  const Graph g = random_graph(25, 0.2, rng);
  std::ostringstream out;
  write_nodal_cdfs_csv({{"g", &g}}, out);
  const auto rows = parse_csv(out.str());
  std::map<std::string, std::pair<double, double>> last;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double value = std::stod(rows[k][2]);
    const double cum = std::stod(rows[k][3]);
    auto it = last.find(rows[k][1]);
    if (it != last.end()) {
      EXPECT_LT(it->second.first, value);
      EXPECT_LT(it->second.second, cum);
    }
    last[rows[k][1]] = {value, cum};
  }
  ASSERT_EQ(last.size(), 4u);
  for (const auto& [metric, end] : last) EXPECT_DOUBLE_EQ(end.second, 1.0) << metric;
}

TEST(FitJson, TermsAndConvergence) {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  const ModelSpec model({TermSpec::edges(), TermSpec::gwesp()});
  const FitResult f = mple(g, model);
  const Json j = to_json(model, f);
  EXPECT_EQ(j["method"], "mple");
  EXPECT_EQ(j["terms"][1]["term"], "gwesp(0.75)");
  EXPECT_DOUBLE_EQ(j["terms"][0]["theta"].get<double>(), f.theta(0));
  EXPECT_EQ(j["converged"], f.converged);
}

TEST(WriteText, CreatesParentsAndFailsOnDirectories) {
  const fs::path dir = scratch("write");
  write_text(dir / "a" / "b" / "c.txt", "x\n");
  EXPECT_EQ(slurp(dir / "a" / "b" / "c.txt"), "x\n");
  EXPECT_THROW(write_text(dir / "a", "x"), ConfigError);
  fs::remove_all(dir);
}

TEST(PipelineOutputs, FilesListedAndReproducible) {
  const PipelineResult r = small_run(21);
  const fs::path a = scratch("outputs_a");
  const fs::path b = scratch("outputs_b");
  const auto written = write_pipeline_outputs(r, a);
  EXPECT_EQ(written.front(), "summary.json");
  EXPECT_EQ(written.back(), "representative.edges");
  for (const auto& rel : written) EXPECT_TRUE(fs::is_regular_file(a / rel)) << rel;
  EXPECT_NE(std::find(written.begin(), written.end(), "gof/s01.csv"), written.end());
  EXPECT_NE(std::find(written.begin(), written.end(), "networks/edge_based_median.edges"), written.end());
  EXPECT_NE(std::find(written.begin(), written.end(), "networks/constrained_median_2.edges"), written.end());

  std::ifstream rep(a / "representative.edges");
  EXPECT_EQ(load_graph(rep), r.representative_graph());
  const Json summary = Json::parse(slurp(a / "summary.json"));
  EXPECT_EQ(summary["representative"], r.candidates[r.representative].name());
  EXPECT_EQ(summary["subjects"].size(), 3u);
  EXPECT_EQ(summary["gof_scores"].size(), 3u);

  write_pipeline_outputs(small_run(21), b);
  for (const auto& rel : written) EXPECT_EQ(slurp(a / rel), slurp(b / rel)) << rel;
  fs::remove_all(a);
  fs::remove_all(b);
}
