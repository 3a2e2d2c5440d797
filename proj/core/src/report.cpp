#include "brainergm/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "brainergm/error.hpp"
#include "brainergm/graph_io.hpp"
#include "brainergm/numfmt.hpp"

namespace brainergm {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const MetricProfile& p) {
  Json j;
  j["N_c"] = p.n_c;
  j["L"] = optional_json(p.l);
  j["K"] = p.k;
  j["C"] = p.c;
  j["E_loc"] = p.e_loc;
  j["E_glob"] = p.e_glob;
  j["R"] = optional_json(p.r);
  return j;
}

Json to_json(const ModelSpec& model) {
  Json a = Json::array();
  for (const auto& label : model.labels()) a.push_back(label);
  return a;
}

Json to_json(const ModelSpec& model, const FitResult& fit) {
  Json j;
  j["method"] = to_string(fit.method);
  j["converged"] = fit.converged;
  j["message"] = fit.message;
  Json terms = Json::array();
  for (std::size_t k = 0; k < model.size(); ++k) {
    Json t;
    t["term"] = model[k].label();
    t["theta"] = k < static_cast<std::size_t>(fit.theta.size()) ? Json(fit.theta(static_cast<Eigen::Index>(k)))
                                                                 : Json(nullptr);
    t["std_error"] = k < static_cast<std::size_t>(fit.std_errors.size())
                         ? Json(fit.std_errors(static_cast<Eigen::Index>(k)))
                         : Json(nullptr);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  if (fit.diagnostics) {
    const auto& d = *fit.diagnostics;
    Json diag;
    diag["iterations"] = d.iterations;
    diag["sample_size"] = d.sample_size;
    diag["acceptance_rate"] = d.acceptance_rate;
    diag["fallback_updates"] = d.fallback_updates;
    diag["t_ratios"] = vector_json(d.t_ratios);
    j["mcmc"] = std::move(diag);
  }
  if (fit.log_likelihood) j["log_likelihood"] = *fit.log_likelihood;
  return j;
}

Json to_json(const GofReport& report) {
  Json j;
  j["model"] = to_json(report.model);
  j["theta"] = vector_json(report.theta);
  j["nsim"] = report.nsim;
  Json tables = Json::object();
  for (const auto& t : report.tables) {
    Json bins = Json::array();
    for (const auto& b : t.bins) {
      Json bin;
      bin["bin"] = b.label;
      bin["observed"] = b.observed;
      bin["min"] = b.min;
      bin["q05"] = b.q05;
      bin["q25"] = b.q25;
      bin["median"] = b.median;
      bin["q75"] = b.q75;
      bin["q95"] = b.q95;
      bin["max"] = b.max;
      bins.push_back(std::move(bin));
    }
    tables[to_string(t.diagnostic)] = std::move(bins);
  }
  j["diagnostics"] = std::move(tables);
  j["score"] = to_json(gof_score(report));
  return j;
}

Json to_json(const GofScore& score) {
  Json j;
  for (const auto& [d, part] : score.parts) j[to_string(d)] = part;
  j["total"] = score.total;
  return j;
}

Json to_json(const SelectionResult& selection) {
  Json j;
  j["model"] = to_json(selection.model);
  j["score"] = selection.score;
  j["fit"] = to_json(selection.model, selection.fit);
  Json audit = Json::array();
  for (const auto& c : selection.audit) {
    Json r;
    r["step"] = c.step;
    r["model"] = to_json(c.model);
    r["status"] = c.status;
    r["usable"] = c.usable;
    r["score"] = optional_json(c.score);
    r["chosen"] = c.chosen;
    if (c.fit) r["theta"] = vector_json(c.fit->theta);
    audit.push_back(std::move(r));
  }
  j["audit"] = std::move(audit);
  return j;
}

Json to_json(const AssessmentTable& table) {
  Json j;
  j["subject_mean"] = to_json(table.references.mean);
  j["subject_median"] = to_json(table.references.median);
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["network"] = r.entry.name;
    row["kind"] = to_string(r.entry.kind);
    if (r.entry.kind != RowKind::Subject) row["family"] = to_string(r.entry.family);
    if (r.entry.kind == RowKind::Candidate) row["constrained"] = r.entry.constrained;
    row["status"] = r.entry.status;
    row["metrics"] = r.entry.profile ? to_json(*r.entry.profile) : Json(nullptr);
    if (r.entry.kind == RowKind::EdgeBased || r.entry.kind == RowKind::Candidate) {
      row["distance"] = optional_json(r.distance);
      row["distance_without_K"] = optional_json(r.distance_without_k);
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  auto name_of = [&table](const std::optional<std::size_t>& idx) {
    return idx ? Json(table.rows[*idx].entry.name) : Json(nullptr);
  };
  j["best_mean_candidate"] = name_of(table.best_mean_candidate);
  j["best_median_candidate"] = name_of(table.best_median_candidate);
  j["best_candidate"] = name_of(table.best_candidate);
  return j;
}

Json to_json(const ReferenceChoice& choice) {
  Json j;
  j["subject"] = choice.id;
  Json ranking = Json::array();
  for (const auto& r : choice.ranking) {
    Json e;
    e["subject"] = r.id;
    e["total_ks"] = r.total_ks;
    ranking.push_back(std::move(e));
  }
  j["ranking"] = std::move(ranking);
  return j;
}

void write_assessment_csv(const AssessmentTable& table, std::ostream& out) {
  out << "network,kind,family,constrained";
  for (const char* name : kMetricNames) out << ',' << name;
  out << ",distance,distance_without_K,status\n";
  for (const auto& r : table.rows) {
    const auto& e = r.entry;
    out << csv_field(e.name) << ',' << to_string(e.kind) << ','
        << (e.kind == RowKind::Subject ? "" : to_string(e.family)) << ','
        << (e.kind == RowKind::Candidate ? (e.constrained ? "true" : "false") : "");
    if (e.profile) {
      const auto& p = *e.profile;
      out << ',' << format_number(p.n_c) << ',' << format_number(p.l) << ',' << format_number(p.k) << ','
          << format_number(p.c) << ',' << format_number(p.e_loc) << ',' << format_number(p.e_glob) << ','
          << format_number(p.r);
    } else {
      for (std::size_t k = 0; k < kMetricNames.size(); ++k) out << ",NA";
    }
    out << ',' << (r.distance ? format_number(*r.distance) : "") << ','
        << (r.distance_without_k ? format_number(*r.distance_without_k) : "") << ',' << csv_field(e.status) << '\n';
  }
}

void write_gof_csv(const GofReport& report, std::ostream& out) {
  out << "diagnostic,bin,observed,min,q05,q25,median,q75,q95,max\n";
  for (const auto& t : report.tables) {
    for (const auto& b : t.bins) {
      out << to_string(t.diagnostic) << ',' << b.label << ',' << format_number(b.observed) << ','
          << format_number(b.min) << ',' << format_number(b.q05) << ',' << format_number(b.q25) << ','
          << format_number(b.median) << ',' << format_number(b.q75) << ',' << format_number(b.q95) << ','
          << format_number(b.max) << '\n';
    }
  }
}

void write_profiles_csv(const std::vector<std::pair<std::string, MetricProfile>>& rows, std::ostream& out) {
  out << "network";
  for (const char* name : kMetricNames) out << ',' << name;
  out << '\n';
  for (const auto& [name, p] : rows) {
    out << csv_field(name) << ',' << format_number(p.n_c) << ',' << format_number(p.l) << ',' << format_number(p.k)
        << ',' << format_number(p.c) << ',' << format_number(p.e_loc) << ',' << format_number(p.e_glob) << ','
        << format_number(p.r) << '\n';
  }
}

void write_degree_distributions_csv(const std::vector<NamedGraph>& graphs, std::ostream& out) {
  out << "network,degree,count,fraction\n";
  for (const auto& [name, g] : graphs) {
    const auto dist = degree_distribution(*g);
    const double n = std::max(g->num_nodes(), 1);
    for (std::size_t k = 0; k < dist.size(); ++k) {
      out << csv_field(name) << ',' << k << ',' << dist[k] << ',' << format_number(static_cast<double>(dist[k]) / n)
          << '\n';
    }
  }
}

void write_nodal_cdfs_csv(const std::vector<NamedGraph>& graphs, std::ostream& out) {
  out << "network,metric,value,cumulative\n";
  for (const auto& [name, g] : graphs) {
    const NodalDistributions d = nodal_distributions(*g);
    const std::pair<const char*, const Ecdf*> cdfs[] = {{"L", &d.path_length_cdf},
                                                        {"C", &d.clustering_cdf},
                                                        {"E_glob", &d.global_efficiency_cdf},
                                                        {"E_loc", &d.local_efficiency_cdf}};
    for (const auto& [metric, cdf] : cdfs) {
      for (std::size_t k = 0; k < cdf->values.size(); ++k) {
        out << csv_field(name) << ',' << metric << ',' << format_number(cdf->values[k]) << ','
            << format_number(cdf->cumulative[k]) << '\n';
      }
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::vector<std::string> write_pipeline_outputs(const PipelineResult& result, const std::filesystem::path& dir) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text(dir / rel, text);
    written.push_back(rel);
  };

  Json summary;
  summary["subjects"] = result.subject_ids;
  summary["group_model"] = to_json(result.group_model);
  if (!result.selections.empty()) {
    Json sel = Json::object();
    for (std::size_t i = 0; i < result.selections.size(); ++i) sel[result.subject_ids[i]] = to_json(result.selections[i]);
    summary["selections"] = std::move(sel);
    Json prev = Json::array();
    for (const auto& p : result.prevalence) {
      Json e;
      e["term"] = p.term.label();
      e["count"] = p.count;
      prev.push_back(std::move(e));
    }
    summary["prevalence"] = std::move(prev);
  }
  Json fits = Json::object();
  for (const auto& f : result.fits) fits[f.subject] = to_json(f.model, f.fit);
  summary["fits"] = std::move(fits);
  if (!result.gof_reports.empty()) {
    Json scores = Json::object();
    for (std::size_t i = 0; i < result.gof_reports.size(); ++i) {
      scores[result.subject_ids[i]] = to_json(gof_score(result.gof_reports[i]));
    }
    summary["gof_scores"] = std::move(scores);
  }
  summary["theta_mean"] = vector_json(result.theta_mean);
  summary["theta_median"] = vector_json(result.theta_median);
  summary["reference"] = to_json(result.reference);
  Json cands = Json::array();
  for (const auto& c : result.candidates) {
    Json e;
    e["name"] = c.name();
    e["family"] = to_string(c.family);
    e["constrained"] = c.constrained;
    e["seed"] = c.seed;
    e["status"] = c.ok() ? "ok" : "failed: " + c.error;
    if (c.ok()) e["edges"] = c.graph->num_edges();
    cands.push_back(std::move(e));
  }
  summary["candidates"] = std::move(cands);
  summary["assessment"] = to_json(result.assessment);
  summary["representative"] = result.candidates[result.representative].name();
  emit("summary.json", summary.dump(2) + "\n");

  std::ostringstream csv;
  write_assessment_csv(result.assessment, csv);
  emit("assessment.csv", csv.str());

  std::vector<NamedGraph> named;
  for (std::size_t i = 0; i < result.subject_graphs.size(); ++i) {
    named.emplace_back(result.subject_ids[i], &result.subject_graphs[i]);
  }
  for (const auto& e : result.edge_based) named.emplace_back(e.name(), &e.graph);
  for (const auto& c : result.candidates) {
    if (c.ok()) named.emplace_back(c.name(), &*c.graph);
  }
  std::ostringstream degrees;
  write_degree_distributions_csv(named, degrees);
  emit("degree_distributions.csv", degrees.str());
  std::ostringstream nodal;
  write_nodal_cdfs_csv(named, nodal);
  emit("nodal_cdfs.csv", nodal.str());

  for (std::size_t i = 0; i < result.gof_reports.size(); ++i) {
    std::ostringstream gof;
    write_gof_csv(result.gof_reports[i], gof);
    emit("gof/" + result.subject_ids[i] + ".csv", gof.str());
  }
  for (const auto& [name, g] : named) {
    std::ostringstream edges;
    save_graph(*g, edges);
    emit("networks/" + name + ".edges", edges.str());
  }
  std::ostringstream rep;
  save_graph(result.representative_graph(), rep);
  emit("representative.edges", rep.str());
  return written;
}

}  // namespace brainergm
