#include "brainergm/terms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brainergm/error.hpp"

namespace brainergm {

bool TermSpec::geometrically_weighted() const {
  switch (kind) {
    case TermKind::GWD:
    case TermKind::GWESP:
    case TermKind::GWNSP:
    case TermKind::GWDSP:
      return true;
    default:
      return false;
  }
}

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::Edges: return "edges";
    case TermKind::TwoPath: return "twopath";
    case TermKind::KDegree: return "kdegree";
    case TermKind::GWD: return "gwd";
    case TermKind::GWESP: return "gwesp";
    case TermKind::GWNSP: return "gwnsp";
    case TermKind::GWDSP: return "gwdsp";
    case TermKind::Nodematch: return "nodematch";
  }
  return "unknown";
}

TermKind term_kind_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  for (TermKind k : {TermKind::Edges, TermKind::TwoPath, TermKind::KDegree, TermKind::GWD, TermKind::GWESP,
                     TermKind::GWNSP, TermKind::GWDSP, TermKind::Nodematch}) {
    if (to_string(k) == s) return k;
  }
  if (s == "degree") return TermKind::KDegree;
  throw ConfigError("unknown term kind '" + name + "'");
}

std::string TermSpec::label() const {
  std::ostringstream os;
  os << to_string(kind);
  if (geometrically_weighted()) os << '(' << tau << ')';
  if (kind == TermKind::KDegree) os << '(' << k << ')';
  if (kind == TermKind::Nodematch && !attribute.empty()) os << '(' << attribute << ')';
  return os.str();
}

ModelSpec::ModelSpec(std::vector<TermSpec> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("model needs at least one term");
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    const auto& t = terms_[a];
    if (t.geometrically_weighted() && !(t.tau > 0.0 && std::isfinite(t.tau))) {
      throw ConfigError("term " + t.label() + " needs a decay tau > 0");
    }
    if (!t.geometrically_weighted() && t.tau != 0.0) {
      throw ConfigError("term " + to_string(t.kind) + " does not take a decay parameter");
    }
    if (t.kind == TermKind::KDegree && t.k < 0) throw ConfigError("kdegree needs k >= 0");
    for (std::size_t b = 0; b < a; ++b) {
      if (terms_[b] == t) throw ConfigError("duplicate term " + t.label());
    }
  }
}

ModelSpec parse_model(const std::string& text, double default_tau) {
  auto trim = [](const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return std::string();
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
  };
  std::vector<TermSpec> terms;
  std::string token;
  auto flush = [&] {
    const std::string t = trim(token);
    token.clear();
    if (t.empty()) throw ConfigError("empty term in model '" + text + "'");
    const auto open = t.find('(');
    std::string name = trim(t.substr(0, open));
    std::string arg;
    if (open != std::string::npos) {
      if (t.back() != ')') throw ConfigError("unbalanced parenthesis in term '" + t + "'");
      arg = trim(t.substr(open + 1, t.size() - open - 2));
    }
    TermSpec spec = TermSpec::make(term_kind_from_string(name));
    try {
      if (spec.geometrically_weighted()) {
        spec.tau = arg.empty() ? default_tau : std::stod(arg);
      } else if (spec.kind == TermKind::KDegree) {
        if (arg.empty()) throw ConfigError("kdegree needs k, e.g. kdegree(2)");
        spec.k = std::stoi(arg);
      } else if (spec.kind == TermKind::Nodematch) {
        spec.attribute = arg;
      } else if (!arg.empty()) {
        throw ConfigError("term " + name + " takes no argument");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("invalid argument '" + arg + "' for term " + name);
    }
    terms.push_back(std::move(spec));
  };
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == '+' || c == ',') && depth == 0) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return ModelSpec(std::move(terms));
}

ModelSpec ModelSpec::group_default(double tau) {
  return ModelSpec({TermSpec::edges(), TermSpec::gwesp(tau), TermSpec::gwnsp(tau)});
}

bool ModelSpec::contains(TermKind kind) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const TermSpec& t) { return t.kind == kind; });
}

std::vector<std::string> ModelSpec::labels() const {
  std::vector<std::string> out;
  for (const auto& t : terms_) out.push_back(t.label());
  return out;
}

std::string ModelSpec::label() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += t.label();
  }
  return out;
}

ModelSpec ModelSpec::with_term(TermSpec t) const {
  auto terms = terms_;
  terms.push_back(std::move(t));
  return ModelSpec(std::move(terms));
}

ModelSpec ModelSpec::without_term(std::size_t index) const {
  auto terms = terms_;
  terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(index));
  return ModelSpec(std::move(terms));
}

namespace detail {

CompiledModel::CompiledModel(const ModelSpec& model, int n, const NodeAttributes* attrs) {
  if (model.empty()) throw ConfigError("model needs at least one term");
  for (const auto& spec : model.terms()) {
    CompiledTerm t{spec.kind, spec.k, {}, {}};
    if (spec.geometrically_weighted()) {
      const double r = 1.0 - std::exp(-spec.tau);
      const double scale = std::exp(spec.tau);
      const auto size = static_cast<std::size_t>(n) + 1;
      t.weight.resize(size);
      t.increment.resize(size);
      double rs = 1.0;
      for (std::size_t s = 0; s < size; ++s) {
        t.weight[s] = scale * (1.0 - rs);
        t.increment[s] = rs;
        rs *= r;
      }
    }
    if (spec.kind == TermKind::GWESP || spec.kind == TermKind::GWNSP || spec.kind == TermKind::GWDSP) {
      needs_partners = true;
    }
    if (spec.kind == TermKind::Nodematch) {
      if (attrs == nullptr) throw ConfigError("nodematch term requires a node attribute file");
      if (!spec.attribute.empty() && spec.attribute != attrs->name) {
        throw ConfigError("nodematch attribute '" + spec.attribute + "' not in attribute file (has '" +
                          attrs->name + "')");
      }
      if (static_cast<int>(attrs->labels.size()) != n) {
        throw ConfigError("attribute count " + std::to_string(attrs->labels.size()) + " does not match n=" +
                          std::to_string(n));
      }
      codes = attrs->codes();
    }
    terms.push_back(std::move(t));
  }
}

namespace {

struct AffectedDyad {
  int partners;  // shared partners in the graph without (i, j)
  bool edge;
};

// Core change computation. `partners(a, b)` returns the current shared
// partner count of dyad (a, b); `present` is whether (i, j) is currently an
// edge (counts are corrected to the graph without (i, j)).
template <class PartnerFn>
void compute_change(const CompiledModel& m, const Graph& g, NodeId i, NodeId j, PartnerFn&& partners,
                    std::vector<AffectedDyad>& buffer, double* out) {
  const bool present = g.has_edge(i, j);
  const int shift = present ? 1 : 0;
  const int deg_i = g.degree(i) - shift;
  const int deg_j = g.degree(j) - shift;

  int sp_ij = 0;
  if (m.needs_partners) {
    buffer.clear();
    for (NodeId k : g.neighbors(j)) {
      if (k == i) continue;
      buffer.push_back({partners(i, k) - shift, g.has_edge(i, k)});
    }
    for (NodeId k : g.neighbors(i)) {
      if (k == j) continue;
      buffer.push_back({partners(j, k) - shift, g.has_edge(j, k)});
    }
    sp_ij = partners(i, j);
  }

  for (std::size_t t = 0; t < m.terms.size(); ++t) {
    const CompiledTerm& term = m.terms[t];
    double delta = 0.0;
    switch (term.kind) {
      case TermKind::Edges:
        delta = 1.0;
        break;
      case TermKind::TwoPath:
        delta = deg_i + deg_j;
        break;
      case TermKind::KDegree:
        delta = static_cast<double>((deg_i + 1 == term.k) - (deg_i == term.k) + (deg_j + 1 == term.k) -
                                    (deg_j == term.k));
        break;
      case TermKind::GWD:
        delta = term.increment[deg_i] + term.increment[deg_j];
        break;
      case TermKind::GWESP:
        delta = term.weight[sp_ij];
        for (const auto& d : buffer) {
          if (d.edge) delta += term.increment[d.partners];
        }
        break;
      case TermKind::GWNSP:
        delta = -term.weight[sp_ij];
        for (const auto& d : buffer) {
          if (!d.edge) delta += term.increment[d.partners];
        }
        break;
      case TermKind::GWDSP:
        for (const auto& d : buffer) delta += term.increment[d.partners];
        break;
      case TermKind::Nodematch:
        delta = m.codes[i] == m.codes[j] ? 1.0 : 0.0;
        break;
    }
    out[t] = delta;
  }
}

thread_local std::vector<AffectedDyad> tls_buffer;

int count_common(const Graph& g, NodeId a, NodeId b) {
  const auto& na = g.neighbors(a);
  const auto& nb = g.neighbors(b);
  const auto& small = na.size() < nb.size() ? na : nb;
  const NodeId other = na.size() < nb.size() ? b : a;
  int c = 0;
  for (NodeId k : small) c += g.has_edge(other, k) ? 1 : 0;
  return c;
}

StatVector eval_compiled(const CompiledModel& m, const Graph& g) {
  const int n = g.num_nodes();
  StatVector out = StatVector::Zero(static_cast<Eigen::Index>(m.terms.size()));
  SharedPartnerDistributions dist;
  if (m.needs_partners) dist = shared_partner_distributions(g);
  const auto degree_counts = degree_distribution(g);

  for (std::size_t t = 0; t < m.terms.size(); ++t) {
    const CompiledTerm& term = m.terms[t];
    double value = 0.0;
    switch (term.kind) {
      case TermKind::Edges:
        value = static_cast<double>(g.num_edges());
        break;
      case TermKind::TwoPath:
        for (NodeId v = 0; v < n; ++v) {
          const double k = g.degree(v);
          value += k * (k - 1.0) / 2.0;
        }
        break;
      case TermKind::KDegree:
        value = term.k < n ? static_cast<double>(degree_counts[term.k]) : 0.0;
        break;
      case TermKind::GWD:
        for (std::size_t d = 1; d < degree_counts.size(); ++d) {
          value += term.weight[d] * static_cast<double>(degree_counts[d]);
        }
        break;
      case TermKind::GWESP:
      case TermKind::GWNSP:
      case TermKind::GWDSP: {
        const auto& counts = term.kind == TermKind::GWESP ? dist.esp
                             : term.kind == TermKind::GWNSP ? dist.nsp
                                                            : dist.dsp;
        for (std::size_t s = 1; s < counts.size(); ++s) value += term.weight[s] * static_cast<double>(counts[s]);
        break;
      }
      case TermKind::Nodematch:
        for (const Edge& e : g.edges()) value += m.codes[e.u] == m.codes[e.v] ? 1.0 : 0.0;
        break;
    }
    out[static_cast<Eigen::Index>(t)] = value;
  }
  return out;
}

}  // namespace
}  // namespace detail

StatVector eval_stats(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs) {
  const detail::CompiledModel m(model, g.num_nodes(), attrs);
  return detail::eval_compiled(m, g);
}

StatVector change_stats(const Graph& g, const ModelSpec& model, NodeId i, NodeId j, const NodeAttributes* attrs) {
  g.check_dyad(i, j);
  const detail::CompiledModel m(model, g.num_nodes(), attrs);
  StatVector out(static_cast<Eigen::Index>(model.size()));
  detail::compute_change(
      m, g, i, j, [&](NodeId a, NodeId b) { return detail::count_common(g, a, b); }, detail::tls_buffer,
      out.data());
  return out;
}

ChangeStatTracker::ChangeStatTracker(const ModelSpec& model, Graph start, const NodeAttributes* attrs)
    : model_(model, start.num_nodes(), attrs) {
  reset(std::move(start));
}

void ChangeStatTracker::reset(Graph g) {
  graph_ = std::move(g);
  if (model_.needs_partners) {
    shared_ = shared_partner_matrix(graph_);
  } else {
    shared_.clear();
  }
  stats_ = detail::eval_compiled(model_, graph_);
  scratch_.resize(static_cast<Eigen::Index>(model_.terms.size()));
}

void ChangeStatTracker::change(NodeId i, NodeId j, StatVector& out) const {
  out.resize(static_cast<Eigen::Index>(model_.terms.size()));
  const auto n = static_cast<std::size_t>(graph_.num_nodes());
  detail::compute_change(
      model_, graph_, i, j,
      [&](NodeId a, NodeId b) { return shared_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)]; },
      detail::tls_buffer, out.data());
}

void ChangeStatTracker::toggle(NodeId i, NodeId j, const StatVector& delta) {
  const bool adding = !graph_.has_edge(i, j);
  if (adding) {
    stats_ += delta;
  } else {
    stats_ -= delta;
  }
  if (model_.needs_partners) {
    const int step = adding ? 1 : -1;
    for (NodeId k : graph_.neighbors(j)) {
      if (k == i) continue;
      partners(i, k) += step;
      partners(k, i) += step;
    }
    for (NodeId k : graph_.neighbors(i)) {
      if (k == j) continue;
      partners(j, k) += step;
      partners(k, j) += step;
    }
  }
  graph_.toggle(i, j);
}

void ChangeStatTracker::toggle(NodeId i, NodeId j) {
  graph_.check_dyad(i, j);
  change(i, j, scratch_);
  const StatVector delta = scratch_;
  toggle(i, j, delta);
}

}  // namespace brainergm
