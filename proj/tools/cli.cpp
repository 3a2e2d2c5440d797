#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "brainergm/correlation.hpp"
#include "brainergm/error.hpp"
#include "brainergm/estimator.hpp"
#include "brainergm/gof.hpp"
#include "brainergm/graph_io.hpp"
#include "brainergm/metrics.hpp"
#include "brainergm/numfmt.hpp"
#include "brainergm/pipeline.hpp"
#include "brainergm/report.hpp"
#include "brainergm/sampler.hpp"
#include "brainergm/selection.hpp"

namespace brainergm::cli {

namespace fs = std::filesystem;

namespace {

struct Estimation {
  std::string method = "mcmc";
  std::size_t samples = 4096;
  std::int64_t burn_in = 131'072;
  std::int64_t interval = 256;
  int iterations = 20;
};

void add_estimation(CLI::App* app, Estimation& e) {
  app->add_option("--method", e.method, "Estimator: mple, mcmc or exact")
      ->check(CLI::IsMember({"mple", "mcmc", "exact"}));
  app->add_option("--mcmc-samples", e.samples, "Statistics retained per MCMC MLE iteration");
  app->add_option("--mcmc-burn-in", e.burn_in, "Burn-in proposals per MCMC MLE iteration");
  app->add_option("--mcmc-interval", e.interval, "Proposals between retained MCMC MLE samples");
  app->add_option("--mcmc-iterations", e.iterations, "Maximum MCMC MLE iterations");
}

EstimatorConfig estimator_config(const Estimation& e, std::uint64_t seed) {
  EstimatorConfig c;
  c.method = estimation_method_from_string(e.method);
  c.sample_size = e.samples;
  c.burn_in = e.burn_in;
  c.interval = e.interval;
  c.max_iterations = e.iterations;
  c.seed = seed;
  c.validate();
  return c;
}

struct Simulation {
  std::int64_t burn_in = 50'000;
  std::int64_t thin = 10'000;
};

void add_simulation(CLI::App* app, Simulation& s) {
  app->add_option("--burn-in", s.burn_in, "Proposals discarded before the first simulated network");
  app->add_option("--thin", s.thin, "Proposals between simulated networks");
}

struct Seed {
  std::uint64_t value = 0;
  CLI::Option* option = nullptr;

  // The generated seed is recorded in the manifest like an explicit one.
  void resolve() {
    if (option->count() == 0) {
      std::random_device rd;
      value = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    }
  }
};

void add_seed(CLI::App* app, Seed& s) {
  s.option = app->add_option("--seed", s.value, "Master seed (generated and recorded when omitted)");
}

std::string effective_value(const CLI::Option* opt) {
  if (opt->count() > 0) return opt->results().back();
  return opt->get_default_str();
}

// Effective value of every option of `sub`, in declaration order. Flags are
// booleans, unset options without a default are left out.
Json manifest_options(const CLI::App* sub, const std::map<std::string, std::string>& overrides) {
  Json opts = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "help-all") continue;
    if (auto it = overrides.find(name); it != overrides.end()) {
      opts[name] = it->second;
    } else if (opt->get_expected_max() == 0) {
      opts[name] = opt->count() > 0;
    } else {
      const std::string v = effective_value(opt);
      if (opt->count() > 0 || !v.empty()) opts[name] = v;
    }
  }
  return opts;
}

void write_manifest(const fs::path& path, const CLI::App* sub, const std::map<std::string, std::string>& overrides,
                    const std::vector<std::string>& outputs) {
  Json m;
  m["tool"] = "brainergm";
  m["version"] = BRAINERGM_VERSION;
  m["command"] = sub->get_name();
  m["options"] = manifest_options(sub, overrides);
  m["outputs"] = outputs;
  write_json(path, m);
}

fs::path manifest_beside(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

std::string file_name(const fs::path& p) { return p.filename().string(); }

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

ThetaVector parse_theta(const std::string& text, std::size_t expected) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw ConfigError("invalid theta entry '" + cell + "'");
    }
  }
  if (values.size() != expected) {
    throw DimensionError("theta has " + std::to_string(values.size()) + " entries for a " + std::to_string(expected) +
                         "-term model");
  }
  ThetaVector theta(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) theta(static_cast<Eigen::Index>(k)) = values[k];
  return theta;
}

std::optional<NodeAttributes> maybe_attributes(const std::string& path, int n) {
  if (path.empty()) return std::nullopt;
  return load_attributes(fs::path(path), n);
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SubjectSet load_subjects(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::map<std::string, Subject> by_id;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext != ".csv" && ext != ".edges") continue;
    Subject& s = by_id[entry.path().stem().string()];
    s.id = entry.path().stem().string();
    if (ext == ".csv") {
      s.matrix = load_correlation(entry.path());
    } else {
      s.graph = load_graph(entry.path());
    }
  }
  if (by_id.empty()) throw ConfigError("no subject .csv or .edges files in " + dir.string());
  SubjectSet set;
  for (auto& [id, s] : by_id) set.subjects.push_back(std::move(s));
  return set;
}

void print_fit(std::ostream& out, const ModelSpec& model, const FitResult& fit) {
  out << "term,theta,std_error\n";
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out << model[k].label() << ',' << format_number(fit.theta(i)) << ','
        << (i < fit.std_errors.size() ? format_number(fit.std_errors(i)) : "NA") << '\n';
  }
  out << "converged," << (fit.converged ? "true" : "false") << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Group-representative brain networks from exponential random graph models", "brainergm"};
  app.option_defaults()->always_capture_default();
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.require_subcommand(0, 1);
  std::string replay;
  app.add_option("--manifest", replay, "Re-run the command recorded in a manifest");

  const std::string default_model = ModelSpec::group_default().label();

  // threshold
  auto* c_threshold = app.add_subcommand("threshold", "Threshold a correlation matrix to a network");
  std::string th_in, th_out;
  double th_s = kDefaultDensityExponent;
  double th_fixed = 0.5;
  c_threshold->add_option("--in", th_in, "n x n comma-separated correlation matrix")->required();
  c_threshold->add_option("--s", th_s, "Density exponent: mean degree n^(1/s)");
  auto* th_fixed_opt = c_threshold->add_option("--fixed", th_fixed, "Keep correlations >= this value instead");
  th_fixed_opt->default_str("");
  c_threshold->add_option("--out", th_out, "Edge-list output")->required();

  // metrics
  auto* c_metrics = app.add_subcommand("metrics", "Whole-network metric profile");
  std::string me_in, me_out;
  c_metrics->add_option("--in", me_in, "Edge-list network")->required();
  c_metrics->add_option("--out", me_out, "JSON output (profile, degree distribution, triad census)");

  // fit
  auto* c_fit = app.add_subcommand("fit", "Fit an ERGM to one network");
  std::string fi_in, fi_out, fi_model = default_model, fi_attrs;
  double fi_tau = kDefaultDecay;
  Estimation fi_est;
  Seed fi_seed;
  c_fit->add_option("--in", fi_in, "Edge-list network")->required();
  c_fit->add_option("--model", fi_model, "Model terms, e.g. 'edges + gwesp(0.75) + gwnsp(0.75)'");
  c_fit->add_option("--tau", fi_tau, "Decay for geometrically weighted terms given without one");
  c_fit->add_option("--attributes", fi_attrs, "node_id,<attribute> CSV for nodematch");
  add_estimation(c_fit, fi_est);
  add_seed(c_fit, fi_seed);
  c_fit->add_option("--out", fi_out, "JSON output")->required();

  // select-model
  auto* c_select = app.add_subcommand("select-model", "Four-step model selection by GOF score");
  std::string se_in, se_out, se_attrs;
  double se_tau = kDefaultDecay;
  int se_nsim = 100;
  Estimation se_est;
  Simulation se_sim;
  Seed se_seed;
  c_select->add_option("--in", se_in, "Edge-list network")->required();
  c_select->add_option("--attributes", se_attrs, "node_id,<attribute> CSV; enables the nodematch step");
  c_select->add_option("--tau", se_tau, "Decay of the geometrically weighted terms");
  add_estimation(c_select, se_est);
  c_select->add_option("--nsim", se_nsim, "Simulated networks per GOF score");
  add_simulation(c_select, se_sim);
  add_seed(c_select, se_seed);
  c_select->add_option("--out", se_out, "JSON output with the audit trail")->required();

  // simulate
  auto* c_simulate = app.add_subcommand("simulate", "Simulate networks from an ERGM");
  std::string si_model = default_model, si_theta, si_constrain, si_attrs, si_out;
  double si_tau = kDefaultDecay;
  int si_n = 0;
  int si_count = 1;
  Simulation si_sim;
  Seed si_seed;
  c_simulate->add_option("--model", si_model, "Model terms");
  c_simulate->add_option("--tau", si_tau, "Decay for geometrically weighted terms given without one");
  c_simulate->add_option("--theta", si_theta, "Comma-separated coefficients, e.g. --theta=-2.7,1.0,-0.3")->required();
  c_simulate->add_option("--n", si_n, "Number of nodes (unconstrained simulation)");
  c_simulate->add_option("--count", si_count, "Number of networks")->check(CLI::PositiveNumber);
  c_simulate->add_option("--constrain", si_constrain, "Edge list whose degree sequence every network keeps");
  c_simulate->add_option("--attributes", si_attrs, "node_id,<attribute> CSV for nodematch");
  add_simulation(c_simulate, si_sim);
  add_seed(c_simulate, si_seed);
  c_simulate->add_option("--out-dir", si_out, "Output directory")->required();

  // gof
  auto* c_gof = app.add_subcommand("gof", "Goodness-of-fit tables for a fitted ERGM");
  std::string go_in, go_model = default_model, go_theta, go_attrs, go_out;
  double go_tau = kDefaultDecay;
  int go_nsim = 100;
  bool go_nsp = false;
  Simulation go_sim;
  Seed go_seed;
  c_gof->add_option("--in", go_in, "Observed edge-list network")->required();
  c_gof->add_option("--model", go_model, "Model terms");
  c_gof->add_option("--tau", go_tau, "Decay for geometrically weighted terms given without one");
  c_gof->add_option("--theta", go_theta, "Comma-separated coefficients")->required();
  c_gof->add_option("--attributes", go_attrs, "node_id,<attribute> CSV for nodematch");
  c_gof->add_option("--nsim", go_nsim, "Simulated networks");
  c_gof->add_flag("--include-nsp", go_nsp, "Add the non-edgewise shared partner diagnostic");
  add_simulation(c_gof, go_sim);
  add_seed(c_gof, go_seed);
  c_gof->add_option("--out-dir", go_out, "Output directory")->required();

  // assess
  auto* c_assess = app.add_subcommand("assess", "Distances of candidate networks to the subject profiles");
  std::string as_subjects, as_mean, as_median, as_edge_mean, as_edge_median, as_out;
  c_assess->add_option("--subjects-dir", as_subjects, "Directory of subject .edges files")->required();
  c_assess->add_option("--mean-candidates", as_mean, "Directory of candidates compared with the subject mean");
  c_assess->add_option("--median-candidates", as_median, "Directory of candidates compared with the subject median");
  c_assess->add_option("--edge-mean", as_edge_mean, "Edge-based mean network");
  c_assess->add_option("--edge-median", as_edge_median, "Edge-based median network");
  c_assess->add_option("--out", as_out, "Assessment CSV")->required();

  // pipeline
  auto* c_pipeline = app.add_subcommand("pipeline", "Full representative-network pipeline");
  std::string pi_subjects, pi_attrs, pi_source = "fixed", pi_model = default_model, pi_out = "pipeline_out";
  double pi_s = kDefaultDensityExponent;
  double pi_group_fixed = 0.5;
  double pi_tau = kDefaultDecay;
  int pi_m = 5;
  int pi_nsim = 100;
  int pi_jobs = 1;
  bool pi_no_constraint = false;
  bool pi_no_gof = false;
  std::int64_t pi_candidate_burn = CandidateConfig::default_candidate_sampler().burn_in;
  Estimation pi_est;
  Simulation pi_sim;
  Seed pi_seed;
  c_pipeline->add_option("--subjects", pi_subjects, "Directory of subject .csv matrices and/or .edges networks")
      ->required();
  c_pipeline->add_option("--attributes", pi_attrs, "node_id,<attribute> CSV");
  c_pipeline->add_option("--s", pi_s, "Density exponent for subject and edge-based networks");
  auto* pi_group_fixed_opt =
      c_pipeline->add_option("--group-fixed", pi_group_fixed, "Threshold edge-based networks at this correlation");
  pi_group_fixed_opt->default_str("");
  c_pipeline->add_option("--model-source", pi_source, "fixed or select")->check(CLI::IsMember({"fixed", "select"}));
  c_pipeline->add_option("--model", pi_model, "Group model when --model-source fixed");
  c_pipeline->add_option("--tau", pi_tau, "Decay of the geometrically weighted terms");
  c_pipeline->add_option("--m", pi_m, "Candidates per family")->check(CLI::PositiveNumber);
  c_pipeline->add_flag("--no-constraint", pi_no_constraint, "Skip degree-constrained candidates");
  c_pipeline->add_flag("--no-gof", pi_no_gof, "Skip per-subject GOF tables");
  c_pipeline->add_option("--nsim", pi_nsim, "Simulated networks per GOF table");
  add_simulation(c_pipeline, pi_sim);
  c_pipeline->add_option("--candidate-burn-in", pi_candidate_burn, "Burn-in proposals per candidate network");
  add_estimation(c_pipeline, pi_est);
  add_seed(c_pipeline, pi_seed);
  c_pipeline->add_option("--jobs", pi_jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_pipeline->add_option("--out-dir", pi_out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun 'brainergm --help' for usage.\n";
    return kExitUsage;
  }

  if (!replay.empty()) {
    if (!app.get_subcommands().empty()) {
      err << "usage error: --manifest cannot be combined with a subcommand\n";
      return kExitUsage;
    }
    std::vector<std::string> again;
    try {
      std::ifstream in(replay);
      if (!in) throw ConfigError("cannot open manifest " + replay);
      const Json m = Json::parse(in);
      again.push_back(m.at("command").get<std::string>());
      for (const auto& [name, value] : m.at("options").items()) {
        if (value.is_boolean()) {
          if (value.get<bool>()) again.push_back("--" + name);
        } else {
          again.push_back("--" + name + "=" + value.get<std::string>());
        }
      }
    } catch (const Json::exception& e) {
      err << "error [config]: malformed manifest " << replay << ": " << e.what() << '\n';
      return kExitDomainError;
    } catch (const Error& e) {
      err << "error [" << e.stage() << "]: " << e.what() << '\n';
      return kExitDomainError;
    }
    return run(again, out, err);
  }
  if (app.get_subcommands().empty()) {
    err << "usage error: a subcommand is required\n" << app.help();
    return kExitUsage;
  }

  try {
    if (c_threshold->parsed()) {
      ThresholdConfig tc;
      tc.s = th_s;
      if (th_fixed_opt->count() > 0) {
        tc.mode = ThresholdMode::Fixed;
        tc.value = th_fixed;
      }
      const Graph g = threshold(load_correlation(fs::path(th_in)), tc);
      ensure_parent(th_out);
      save_graph(g, fs::path(th_out));
      write_manifest(manifest_beside(th_out), c_threshold, {}, {file_name(th_out)});
      out << "wrote " << g.num_edges() << " edges on " << g.num_nodes() << " nodes to " << th_out << '\n';
    } else if (c_metrics->parsed()) {
      const Graph g = load_graph(fs::path(me_in));
      const MetricProfile p = metric_profile(g);
      write_profiles_csv({{fs::path(me_in).stem().string(), p}}, out);
      if (!me_out.empty()) {
        Json j;
        j["network"] = fs::path(me_in).stem().string();
        j["nodes"] = g.num_nodes();
        j["edges"] = g.num_edges();
        j["metrics"] = to_json(p);
        j["degree_distribution"] = degree_distribution(g);
        if (g.num_nodes() >= 3) {
          const auto t = triad_census(g);
          j["triad_census"] = {t.empty, t.one_edge, t.two_path, t.triangle};
        }
        ensure_parent(me_out);
        write_json(me_out, j);
        write_manifest(manifest_beside(me_out), c_metrics, {}, {file_name(me_out)});
      }
    } else if (c_fit->parsed()) {
      fi_seed.resolve();
      const Graph g = load_graph(fs::path(fi_in));
      const auto attrs = maybe_attributes(fi_attrs, g.num_nodes());
      const ModelSpec model = parse_model(fi_model, fi_tau);
      const FitResult result = fit(g, model, estimator_config(fi_est, fi_seed.value), attrs ? &*attrs : nullptr);
      Json j = to_json(model, result);
      ensure_parent(fi_out);
      write_json(fi_out, j);
      write_manifest(manifest_beside(fi_out), c_fit, {{"seed", std::to_string(fi_seed.value)}}, {file_name(fi_out)});
      print_fit(out, model, result);
      if (!result.converged) err << "warning: " << result.message << '\n';
    } else if (c_select->parsed()) {
      se_seed.resolve();
      const Graph g = load_graph(fs::path(se_in));
      const auto attrs = maybe_attributes(se_attrs, g.num_nodes());
      SelectionConfig sc;
      sc.estimator = estimator_config(se_est, se_seed.value);
      sc.gof.nsim = se_nsim;
      sc.gof.sampler.burn_in = se_sim.burn_in;
      sc.gof.sampler.thin = se_sim.thin;
      sc.gof.sampler.seed = se_seed.value;
      sc.tau = se_tau;
      const SelectionResult r = select_model(g, attrs ? &*attrs : nullptr, sc);
      ensure_parent(se_out);
      write_json(se_out, to_json(r));
      write_manifest(manifest_beside(se_out), c_select, {{"seed", std::to_string(se_seed.value)}},
                     {file_name(se_out)});
      out << "selected " << r.model.label() << " (GOF score " << format_number(r.score) << ")\n";
    } else if (c_simulate->parsed()) {
      si_seed.resolve();
      const ModelSpec model = parse_model(si_model, si_tau);
      const ThetaVector theta = parse_theta(si_theta, model.size());
      SamplerConfig sc;
      sc.burn_in = si_sim.burn_in;
      sc.thin = si_sim.thin;
      sc.seed = si_seed.value;
      sc.num_samples = static_cast<std::size_t>(si_count);
      SampleSet set;
      std::optional<NodeAttributes> attrs;
      if (!si_constrain.empty()) {
        const Graph ref = load_graph(fs::path(si_constrain));
        attrs = maybe_attributes(si_attrs, ref.num_nodes());
        sc.proposal = Proposal::DegreeSwap;
        set = sample_degree_constrained(model, theta, degree_sequence(ref), sc, attrs ? &*attrs : nullptr);
      } else {
        if (si_n < 1) throw ConfigError("--n is required without --constrain");
        attrs = maybe_attributes(si_attrs, si_n);
        set = sample_networks(model, theta, si_n, sc, attrs ? &*attrs : nullptr);
      }
      const fs::path dir(si_out);
      std::vector<std::string> outputs;
      std::ostringstream stats;
      stats << "network";
      for (const auto& label : model.labels()) stats << ',' << label;
      stats << '\n';
      for (std::size_t k = 0; k < set.graphs.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "sim_%03zu.edges", k + 1);
        std::ostringstream edges;
        save_graph(set.graphs[k], edges);
        write_text(dir / name, edges.str());
        outputs.emplace_back(name);
        stats << name;
        for (Eigen::Index i = 0; i < set.stats[k].size(); ++i) stats << ',' << format_number(set.stats[k](i));
        stats << '\n';
      }
      write_text(dir / "stats.csv", stats.str());
      outputs.emplace_back("stats.csv");
      write_manifest(dir / "manifest.json", c_simulate, {{"seed", std::to_string(si_seed.value)}}, outputs);
      out << "wrote " << set.graphs.size() << " networks to " << dir.string() << '\n';
    } else if (c_gof->parsed()) {
      go_seed.resolve();
      const Graph g = load_graph(fs::path(go_in));
      const auto attrs = maybe_attributes(go_attrs, g.num_nodes());
      const ModelSpec model = parse_model(go_model, go_tau);
      GofConfig gc;
      gc.nsim = go_nsim;
      gc.include_nsp = go_nsp;
      gc.sampler.burn_in = go_sim.burn_in;
      gc.sampler.thin = go_sim.thin;
      gc.sampler.seed = go_seed.value;
      const GofReport report = gof_report(g, model, parse_theta(go_theta, model.size()), gc, attrs ? &*attrs : nullptr);
      const fs::path dir(go_out);
      write_json(dir / "gof.json", to_json(report));
      std::ostringstream csv;
      write_gof_csv(report, csv);
      write_text(dir / "gof.csv", csv.str());
      write_manifest(dir / "manifest.json", c_gof, {{"seed", std::to_string(go_seed.value)}}, {"gof.json", "gof.csv"});
      const GofScore score = gof_score(report);
      out << "diagnostic,score\n";
      for (const auto& [d, part] : score.parts) out << to_string(d) << ',' << format_number(part) << '\n';
      out << "total," << format_number(score.total) << '\n';
    } else if (c_assess->parsed()) {
      std::vector<std::string> ids;
      std::vector<MetricProfile> subject_profiles;
      std::vector<ProfileEntry> entries;
      for (const auto& path : files_with_extension(as_subjects, ".edges")) {
        ids.push_back(path.stem().string());
        subject_profiles.push_back(metric_profile(load_graph(path)));
        ProfileEntry e;
        e.name = ids.back();
        e.kind = RowKind::Subject;
        e.profile = subject_profiles.back();
        entries.push_back(std::move(e));
      }
      if (ids.empty()) throw ConfigError("no subject .edges files in " + as_subjects);
      const ReferenceProfiles refs = reference_profiles(subject_profiles, ids);
      for (GroupMode family : {GroupMode::Mean, GroupMode::Median}) {
        ProfileEntry e;
        e.name = "subject_" + to_string(family);
        e.kind = RowKind::Reference;
        e.family = family;
        e.profile = family == GroupMode::Mean ? refs.mean : refs.median;
        entries.push_back(std::move(e));
      }
      const std::pair<GroupMode, std::string> edge_files[] = {{GroupMode::Mean, as_edge_mean},
                                                              {GroupMode::Median, as_edge_median}};
      for (const auto& [family, path] : edge_files) {
        if (path.empty()) continue;
        ProfileEntry e;
        e.name = "edge_based_" + to_string(family);
        e.kind = RowKind::EdgeBased;
        e.family = family;
        e.profile = metric_profile(load_graph(fs::path(path)));
        entries.push_back(std::move(e));
      }
      std::size_t index = 0;
      const std::pair<GroupMode, std::string> candidate_dirs[] = {{GroupMode::Mean, as_mean},
                                                                  {GroupMode::Median, as_median}};
      for (const auto& [family, dir] : candidate_dirs) {
        if (dir.empty()) continue;
        for (const auto& path : files_with_extension(dir, ".edges")) {
          ProfileEntry e;
          e.name = path.stem().string();
          e.kind = RowKind::Candidate;
          e.family = family;
          e.candidate = index++;
          e.profile = metric_profile(load_graph(path));
          entries.push_back(std::move(e));
        }
      }
      const AssessmentTable table = assess_profiles(refs, entries);
      std::ostringstream csv;
      write_assessment_csv(table, csv);
      write_text(as_out, csv.str());
      write_manifest(manifest_beside(as_out), c_assess, {}, {file_name(as_out)});
      out << csv.str();
    } else if (c_pipeline->parsed()) {
      pi_seed.resolve();
      SubjectSet set = load_subjects(pi_subjects);
      if (!pi_attrs.empty()) set.attributes = load_attributes(fs::path(pi_attrs), set.num_nodes());
      PipelineConfig pc;
      pc.threshold.s = pi_s;
      pc.group_threshold.s = pi_s;
      if (pi_group_fixed_opt->count() > 0) {
        pc.group_threshold.mode = ThresholdMode::Fixed;
        pc.group_threshold.value = pi_group_fixed;
      }
      pc.model_source = model_source_from_string(pi_source);
      pc.model = parse_model(pi_model, pi_tau);
      pc.estimator = estimator_config(pi_est, pi_seed.value);
      pc.selection.estimator = pc.estimator;
      pc.selection.tau = pi_tau;
      pc.selection.gof.nsim = pi_nsim;
      pc.selection.gof.sampler.burn_in = pi_sim.burn_in;
      pc.selection.gof.sampler.thin = pi_sim.thin;
      pc.gof = !pi_no_gof;
      pc.gof_config = pc.selection.gof;
      pc.candidates.m = pi_m;
      pc.candidates.sampler.burn_in = pi_candidate_burn;
      pc.constrained = !pi_no_constraint;
      pc.seed = pi_seed.value;
      pc.jobs = pi_jobs;
      const PipelineResult result = run_pipeline(set, pc);
      const fs::path dir(pi_out);
      auto outputs = write_pipeline_outputs(result, dir);
      write_manifest(dir / "manifest.json", c_pipeline, {{"seed", std::to_string(pi_seed.value)}}, outputs);
      const auto& best = result.assessment.rows[*result.assessment.best_candidate];
      out << "group model: " << result.group_model.label() << '\n'
          << "representative: " << best.entry.name << " (distance " << format_number(*best.distance) << ")\n";
      for (const auto& e : result.edge_based) {
        const auto& row = result.assessment.row(e.name());
        out << e.name() << ": distance " << format_number(row.distance) << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error [" << e.stage() << "]: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace brainergm::cli
