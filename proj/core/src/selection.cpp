#include "brainergm/selection.hpp"

#include <algorithm>

#include "brainergm/error.hpp"

namespace brainergm {

namespace {

CandidateRecord evaluate(int step, const ModelSpec& model, const Graph& g, const NodeAttributes* attrs,
                         const SelectionConfig& config) {
  CandidateRecord rec;
  rec.step = step;
  rec.model = model;
  try {
    FitResult fit_result = fit(g, model, config.estimator, attrs);
    if (!fit_result.converged) {
      rec.status = "not converged: " + fit_result.message;
      rec.fit = std::move(fit_result);
      return rec;
    }
    const GofReport report = gof_report(g, model, fit_result.theta, config.gof, attrs);
    rec.score = gof_score(report).total;
    rec.fit = std::move(fit_result);
    rec.usable = true;
    rec.status = "ok";
  } catch (const DegeneracyError& e) {
    rec.status = std::string("degenerate: ") + e.what();
  } catch (const Error& e) {
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

}  // namespace

std::size_t best_candidate(const std::vector<CandidateRecord>& records) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    if (!r.usable) continue;
    if (!best) {
      best = k;
      continue;
    }
    const auto& b = records[*best];
    if (*r.score < *b.score || (*r.score == *b.score && r.model.size() < b.model.size())) best = k;
  }
  if (!best) {
    const int step = records.empty() ? 0 : records.front().step;
    throw SelectionError("every candidate model failed at step " + std::to_string(step));
  }
  return *best;
}

SelectionResult select_model(const Graph& g, const NodeAttributes* attrs, const SelectionConfig& config) {
  const double tau = config.tau;
  SelectionResult result;
  auto run_step = [&](int step, const std::vector<ModelSpec>& models) {
    std::vector<CandidateRecord> records;
    for (const auto& m : models) records.push_back(evaluate(step, m, g, attrs, config));
    const std::size_t best = best_candidate(records);
    records[best].chosen = true;
    const CandidateRecord winner = records[best];
    for (auto& r : records) result.audit.push_back(std::move(r));
    return winner;
  };

  // Step 1: connectedness term.
  const std::vector<TermSpec> rest1{TermSpec::gwesp(tau), TermSpec::gwdsp(tau), TermSpec::gwnsp(tau),
                                    TermSpec::gwd(tau)};
  auto with_first = [](TermSpec first, const std::vector<TermSpec>& rest) {
    std::vector<TermSpec> terms{std::move(first)};
    terms.insert(terms.end(), rest.begin(), rest.end());
    return ModelSpec(std::move(terms));
  };
  const CandidateRecord s1 =
      run_step(1, {with_first(TermSpec::edges(), rest1), with_first(TermSpec::two_path(), rest1)});
  const TermSpec connect = s1.model[0];

  // Step 2: local-efficiency term.
  const CandidateRecord s2 =
      run_step(2, {ModelSpec({connect, TermSpec::gwesp(tau), TermSpec::gwnsp(tau), TermSpec::gwd(tau)}),
                   ModelSpec({connect, TermSpec::gwdsp(tau), TermSpec::gwnsp(tau), TermSpec::gwd(tau)})});

  // Step 3: the four-term model against each three-term submodel. The
  // four-term fit is carried over from step 2.
  std::vector<CandidateRecord> step3;
  CandidateRecord full = s2;
  full.step = 3;
  full.chosen = false;
  step3.push_back(full);
  for (std::size_t t = 0; t < s2.model.size(); ++t) {
    step3.push_back(evaluate(3, s2.model.without_term(t), g, attrs, config));
  }
  const std::size_t best3 = best_candidate(step3);
  step3[best3].chosen = true;
  CandidateRecord winner = step3[best3];
  for (auto& r : step3) result.audit.push_back(std::move(r));

  // Step 4: nodal location.
  if (attrs != nullptr) {
    const std::string attribute = config.attribute.empty() ? attrs->name : config.attribute;
    CandidateRecord nm = evaluate(4, winner.model.with_term(TermSpec::nodematch(attribute)), g, attrs, config);
    if (nm.usable && *nm.score < *winner.score) {
      nm.chosen = true;
      winner = nm;
    }
    result.audit.push_back(std::move(nm));
  } else {
    CandidateRecord skipped;
    skipped.step = 4;
    skipped.model = winner.model;
    skipped.status = "skipped: no node attributes";
    result.audit.push_back(std::move(skipped));
  }

  result.model = winner.model;
  result.fit = *winner.fit;
  result.score = *winner.score;
  return result;
}

ModelSpec derive_group_model(const std::vector<ModelSpec>& best_models, std::vector<TermPrevalence>* prevalence) {
  if (best_models.empty()) throw SelectionError("no per-subject models to combine");
  std::vector<TermPrevalence> counts;
  for (const auto& model : best_models) {
    for (const auto& term : model.terms()) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const TermPrevalence& p) { return p.term == term; });
      if (it == counts.end()) {
        counts.push_back({term, 1});
      } else {
        ++it->count;
      }
    }
  }
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::Edges: return 0;
      case TermKind::TwoPath: return 1;
      case TermKind::GWESP: return 2;
      case TermKind::GWDSP: return 3;
      case TermKind::GWNSP: return 4;
      case TermKind::GWD: return 5;
      case TermKind::KDegree: return 6;
      case TermKind::Nodematch: return 7;
    }
    return 8;
  };
  std::stable_sort(counts.begin(), counts.end(),
                   [&](const TermPrevalence& a, const TermPrevalence& b) { return rank(a.term.kind) < rank(b.term.kind); });
  if (prevalence != nullptr) *prevalence = counts;

  const auto total = static_cast<int>(best_models.size());
  std::vector<TermPrevalence> kept;
  for (const auto& p : counts) {
    if (2 * p.count >= total) kept.push_back(p);
  }
  // Exclusive alternatives: keep the more prevalent, earlier canonical kind on ties.
  auto resolve = [&kept](TermKind first, TermKind second) {
    auto a = std::find_if(kept.begin(), kept.end(), [&](const TermPrevalence& p) { return p.term.kind == first; });
    auto b = std::find_if(kept.begin(), kept.end(), [&](const TermPrevalence& p) { return p.term.kind == second; });
    if (a == kept.end() || b == kept.end()) return;
    kept.erase(b->count > a->count ? a : b);
  };
  resolve(TermKind::Edges, TermKind::TwoPath);
  resolve(TermKind::GWESP, TermKind::GWDSP);
  if (kept.empty()) throw SelectionError("no term appears in at least half of the per-subject models");
  std::vector<TermSpec> terms;
  for (const auto& p : kept) terms.push_back(p.term);
  return ModelSpec(std::move(terms));
}

}  // namespace brainergm
