#include "brainergm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "brainergm/error.hpp"
#include "brainergm/sampler.hpp"

namespace brainergm {

std::string to_string(EstimationMethod m) {
  switch (m) {
    case EstimationMethod::Mple: return "mple";
    case EstimationMethod::McmcMle: return "mcmc_mle";
    case EstimationMethod::Exact: return "exact";
  }
  return "mple";
}

EstimationMethod estimation_method_from_string(const std::string& s) {
  if (s == "mple") return EstimationMethod::Mple;
  if (s == "mcmc_mle" || s == "mcmcmle" || s == "mcmc") return EstimationMethod::McmcMle;
  if (s == "exact") return EstimationMethod::Exact;
  throw ConfigError("unknown estimation method '" + s + "'");
}

void EstimatorConfig::validate() const {
  if (method == EstimationMethod::McmcMle && sample_size < 100) {
    throw ConfigError("mcmc_mle needs sample_size >= 100");
  }
  if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
  if (interval < 1) throw ConfigError("interval must be >= 1");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(t_ratio_threshold > 0.0)) throw ConfigError("t_ratio_threshold must be > 0");
  if (exact_limit < 1 || exact_limit > kExactHardCap) {
    throw ConfigError("exact_limit must be in [1, " + std::to_string(kExactHardCap) + "]");
  }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Eigenvalues below this fraction of the largest are treated as zero, so
// exactly collinear statistics give the minimum-norm solution.
constexpr double kPinvTolerance = 1e-9;

MatrixXd pinv_psd(const MatrixXd& a) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd& ev = es.eigenvalues();
  const double cutoff = kPinvTolerance * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  VectorXd inv(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) inv[k] = ev[k] > cutoff && ev[k] > 0.0 ? 1.0 / ev[k] : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

VectorXd solve_min_norm(const MatrixXd& a, const VectorXd& b) { return pinv_psd(a) * b; }

VectorXd pinv_diagonal_sqrt(const MatrixXd& information) {
  return pinv_psd(information).diagonal().cwiseMax(0.0).cwiseSqrt();
}

double log1p_exp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_dimension(const ThetaVector& theta, const ModelSpec& model) {
  if (static_cast<std::size_t>(theta.size()) != model.size()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, model has " +
                         std::to_string(model.size()) + " terms");
  }
}

// Weighted moments of rows of `z` under weights proportional to exp(delta . z_s).
struct TiltedMoments {
  VectorXd mean;
  MatrixXd cov;
  double log_mean_weight = 0.0;  // log (1/N) sum exp(delta . z_s)
  double ess = 0.0;
};

TiltedMoments tilted_moments(const MatrixXd& z, const VectorXd& delta) {
  const auto n = z.rows();
  const VectorXd eta = z * delta;
  const double max_eta = eta.maxCoeff();
  VectorXd w = (eta.array() - max_eta).exp();
  const double total = w.sum();
  TiltedMoments m;
  m.log_mean_weight = max_eta + std::log(total / static_cast<double>(n));
  w /= total;
  m.ess = 1.0 / w.squaredNorm();
  m.mean = z.transpose() * w;
  const MatrixXd centered = z.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * w.asDiagonal() * centered;
  return m;
}

struct GtStep {
  VectorXd delta;
  double gamma = 0.0;
  bool ok = false;
};

// Maximizes delta . xi - log mean exp(delta . z_s) (the importance-sampling
// approximation of the log-likelihood ratio with z centered at the sample
// mean), shrinking the target xi = gamma (g_obs - mean) toward the sample mean
// when the full target is not attainable.
GtStep geyer_thompson(const MatrixXd& z, const VectorXd& target, double ridge) {
  const auto dim = z.cols();
  const double min_ess = 0.05 * static_cast<double>(z.rows());
  for (int level = 0; level <= 6; ++level) {
    const double gamma = std::ldexp(1.0, -level);
    const VectorXd xi = gamma * target;
    VectorXd delta = VectorXd::Zero(dim);
    auto objective = [&](const VectorXd& d, TiltedMoments& m) {
      m = tilted_moments(z, d);
      return d.dot(xi) - m.log_mean_weight;
    };
    TiltedMoments m;
    double f = objective(delta, m);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const VectorXd grad = xi - m.mean;
      const MatrixXd h = m.cov + ridge * MatrixXd::Identity(dim, dim);
      const VectorXd step = solve_min_norm(h, grad);
      // Gradient or Newton decrement small enough; the latter covers flat,
      // ill-conditioned directions where f stops resolving in double precision.
      if (grad.norm() <= 1e-8 * (1.0 + xi.norm()) || grad.dot(step) < 1e-10) {
        converged = true;
        break;
      }
      double scale = 1.0;
      TiltedMoments trial_m;
      bool improved = false;
      for (int ls = 0; ls < 40; ++ls) {
        const VectorXd trial = delta + scale * step;
        const double ft = objective(trial, trial_m);
        if (std::isfinite(ft) && ft >= f - 1e-14 * std::abs(f)) {
          delta = trial;
          f = ft;
          m = trial_m;
          improved = true;
          break;
        }
        scale *= 0.5;
      }
      if (!improved) break;
    }
    if (converged && m.ess >= min_ess) return {delta, gamma, true};
  }
  return {};
}

struct SampleMoments {
  MatrixXd stats;  // rows = samples
  VectorXd mean;
  MatrixXd cov;
  VectorXd sd;
};

SampleMoments moments(std::vector<StatVector> rows) {
  SampleMoments s;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = rows.front().size();
  s.stats.resize(n, p);
  for (Eigen::Index r = 0; r < n; ++r) s.stats.row(r) = rows[static_cast<std::size_t>(r)].transpose();
  s.mean = s.stats.colwise().mean().transpose();
  const MatrixXd centered = s.stats.rowwise() - s.mean.transpose();
  s.cov = centered.transpose() * centered / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  s.sd = s.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return s;
}

}  // namespace

FitResult mple(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs) {
  const int n = g.num_nodes();
  const auto p = static_cast<Eigen::Index>(model.size());
  const auto rows = static_cast<Eigen::Index>(g.num_dyads());
  if (rows == 0) throw EstimationError("MPLE needs at least one dyad");

  ChangeStatTracker tracker(model, g, attrs);
  MatrixXd x(rows, p);
  VectorXd y(rows);
  StatVector delta;
  Eigen::Index r = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j, ++r) {
      tracker.change(i, j, delta);
      x.row(r) = delta.transpose();
      y[r] = g.has_edge(i, j) ? 1.0 : 0.0;
    }
  }

  auto loglik = [&](const VectorXd& theta) {
    const VectorXd eta = x * theta;
    double ll = 0.0;
    for (Eigen::Index k = 0; k < rows; ++k) ll += y[k] * eta[k] - log1p_exp(eta[k]);
    return ll;
  };

  FitResult out;
  out.method = EstimationMethod::Mple;
  VectorXd theta = VectorXd::Zero(p);
  double ll = loglik(theta);
  MatrixXd info(p, p);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const VectorXd eta = x * theta;
    VectorXd prob(rows), w(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      prob[k] = sigmoid(eta[k]);
      w[k] = prob[k] * (1.0 - prob[k]);
    }
    const VectorXd grad = x.transpose() * (y - prob);
    info = x.transpose() * w.asDiagonal() * x;
    const VectorXd step = solve_min_norm(info, grad);
    // A vanishing gradient with a non-vanishing Newton step means the
    // estimate is running off to infinity.
    if (grad.norm() < 1e-8 && step.norm() < 1e-6 * (1.0 + theta.norm())) {
      converged = true;
      break;
    }
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 50; ++ls) {
      const VectorXd trial = theta + scale * step;
      const double lt = loglik(trial);
      if (std::isfinite(lt) && lt >= ll - 1e-12 * std::abs(ll)) {
        theta = trial;
        ll = lt;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }

  const VectorXd eta = x * theta;
  bool saturated = false;
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double prob = sigmoid(eta[k]);
    if (std::min(prob, 1.0 - prob) < 1e-10) saturated = true;
  }
  out.theta = theta;
  out.std_errors = pinv_diagonal_sqrt(info);
  out.converged = converged && !saturated;
  if (saturated) {
    out.message = "separation: fitted edge probabilities saturate at 0 or 1; MPLE does not exist";
  } else if (!converged) {
    out.message = "IRLS did not reach gradient norm 1e-8";
  }
  return out;
}

FitResult mcmc_mle(const Graph& g, const ModelSpec& model, const EstimatorConfig& config,
                   const NodeAttributes* attrs) {
  config.validate();
  if (g.num_edges() == 0 || g.num_edges() == g.num_dyads()) {
    throw EstimationError("MCMC MLE needs a graph that is neither empty nor complete");
  }
  const auto p = static_cast<Eigen::Index>(model.size());
  const StatVector observed = eval_stats(g, model, attrs);

  // Dyad-independent start: density logit on the edges term, zero elsewhere.
  ThetaVector safe_start = ThetaVector::Zero(p);
  {
    const double d = static_cast<double>(g.num_edges()) / static_cast<double>(g.num_dyads());
    for (Eigen::Index t = 0; t < p; ++t) {
      if (model[static_cast<std::size_t>(t)].kind == TermKind::Edges) safe_start[t] = std::log(d / (1.0 - d));
    }
  }
  ThetaVector theta = safe_start;
  bool may_restart = false;
  if (config.initial_theta) {
    check_dimension(*config.initial_theta, model);
    theta = *config.initial_theta;
  } else {
    const FitResult start = mple(g, model, attrs);
    if (start.converged && start.theta.allFinite()) {
      theta = start.theta;
      may_restart = true;
    }
  }

  const std::size_t dyads = g.num_dyads();

  FitResult out;
  out.method = EstimationMethod::McmcMle;
  McmcDiagnostics diag;
  diag.sample_size = config.sample_size;
  int fallback = 0;

  double best_t = std::numeric_limits<double>::infinity();
  ThetaVector best_theta = theta;
  VectorXd best_t_ratios, best_se;
  std::optional<ThetaVector> last_good;
  int backtracks = 0;

  for (int it = 1; it <= config.max_iterations; ++it) {
    // Every iteration restarts from the observed graph so that near-degenerate
    // models are sampled in the neighbourhood of the data.
    MarkovChain chain(model, theta, g, Proposal::Toggle, derive_seed(config.seed, static_cast<std::uint64_t>(it)),
                      attrs);
    chain.run(config.burn_in);
    std::vector<StatVector> rows;
    rows.reserve(config.sample_size);
    std::size_t extreme = 0;
    const std::int64_t accepted_before = chain.accepted();
    const std::int64_t proposed_before = chain.proposals();
    for (std::size_t s = 0; s < config.sample_size; ++s) {
      chain.run(config.interval);
      rows.push_back(chain.stats());
      const std::size_t m = chain.graph().num_edges();
      if (m == 0 || m == dyads) ++extreme;
    }
    diag.acceptance_rate = static_cast<double>(chain.accepted() - accepted_before) /
                           static_cast<double>(std::max<std::int64_t>(chain.proposals() - proposed_before, 1));
    diag.iterations = it;

    std::string bad_term, bad_what;
    if (static_cast<double>(extreme) > config.degeneracy_fraction * static_cast<double>(config.sample_size)) {
      bad_term = "edges";
      bad_what = "degenerate model: " + std::to_string(extreme) + " of " + std::to_string(config.sample_size) +
                 " simulated graphs are empty or complete at iteration " + std::to_string(it);
    }
    const SampleMoments sm = moments(std::move(rows));
    VectorXd t_ratios(p);
    for (Eigen::Index t = 0; t < p; ++t) {
      const double gap = std::abs(sm.mean[t] - observed[t]);
      if (sm.sd[t] <= 1e-12) {
        if (gap > 1e-9 && bad_term.empty()) {
          bad_term = model[static_cast<std::size_t>(t)].label();
          bad_what = "degenerate model: simulated " + bad_term + " has zero variance and cannot match the observed value";
        }
        t_ratios[t] = 0.0;
      } else {
        t_ratios[t] = gap / sm.sd[t];
      }
    }
    if (!bad_term.empty()) {
      // Back off toward the last non-degenerate parameter, or restart from the
      // dyad-independent point when the MPLE itself is degenerate.
      if (last_good && backtracks < 8) {
        theta = *last_good + 0.5 * (theta - *last_good);
        ++backtracks;
        continue;
      }
      if (!last_good && may_restart) {
        theta = safe_start;
        may_restart = false;
        continue;
      }
      throw DegeneracyError(bad_term, bad_what);
    }
    last_good = theta;
    backtracks = 0;
    diag.t_ratios = t_ratios;

    const MatrixXd z = sm.stats.rowwise() - sm.mean.transpose();
    const VectorXd target = observed - sm.mean;
    const bool done = t_ratios.maxCoeff() < config.t_ratio_threshold;
    const GtStep step = geyer_thompson(z, target, config.ridge);
    if (done) {
      if (step.ok && step.gamma == 1.0) theta += step.delta;
      out.converged = true;
      out.std_errors = pinv_diagonal_sqrt(sm.cov);
      break;
    }
    if (t_ratios.maxCoeff() < best_t) {
      best_t = t_ratios.maxCoeff();
      best_theta = theta;
      best_t_ratios = t_ratios;
      best_se = pinv_diagonal_sqrt(sm.cov);
    }
    if (step.ok) {
      theta += step.delta;
    } else {
      const double gain = config.gain_a0 * config.gain_t0 / (fallback + config.gain_t0);
      const MatrixXd c = sm.cov + config.ridge * MatrixXd::Identity(p, p);
      VectorXd delta = gain * solve_min_norm(c, target);
      // Trust region: predicted mean shift of at most one sd per term, and no
      // coordinate moving by more than one unit.
      const double size = delta.dot(c * delta);
      if (size > static_cast<double>(p)) delta *= std::sqrt(static_cast<double>(p) / size);
      const double largest = delta.cwiseAbs().maxCoeff();
      if (largest > 1.0) delta /= largest;
      theta += delta;
      ++fallback;
    }
  }

  diag.fallback_updates = fallback;
  out.theta = theta;
  if (!out.converged && best_se.size() == 0) {
    throw DegeneracyError("edges", "degenerate model: no non-degenerate sample in " +
                                       std::to_string(config.max_iterations) + " iterations");
  }
  if (!out.converged) {
    // Report the iterate whose own sample came closest to the observed statistics.
    out.theta = best_theta;
    out.std_errors = best_se;
    diag.t_ratios = best_t_ratios;
  }
  out.diagnostics = diag;
  if (!out.converged) {
    out.message = "t-ratios did not fall below " + std::to_string(config.t_ratio_threshold) + " in " +
                  std::to_string(config.max_iterations) + " iterations";
  }
  return out;
}

ExactDistribution::ExactDistribution(int n, const ModelSpec& model, const NodeAttributes* attrs, int limit)
    : n_(n) {
  const int cap = std::min(limit, kExactHardCap);
  if (n > cap) {
    throw EstimationError("exact enumeration refused: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(cap));
  }
  if (n < 2) throw EstimationError("exact enumeration needs n >= 2");
  std::vector<Edge> dyads;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) dyads.push_back({i, j});
  const auto d = dyads.size();

  // Gray-code walk: one toggle per step. Distinct statistic vectors are keyed
  // on a rounded grid and re-evaluated exactly on first sight.
  std::map<std::vector<long long>, std::size_t> index;
  ChangeStatTracker tracker(model, Graph(n), attrs);
  auto record = [&]() {
    const StatVector& s = tracker.stats();
    std::vector<long long> key(static_cast<std::size_t>(s.size()));
    for (Eigen::Index t = 0; t < s.size(); ++t) key[static_cast<std::size_t>(t)] = std::llround(s[t] * 1e6);
    auto [it, inserted] = index.emplace(std::move(key), values_.size());
    if (inserted) {
      values_.push_back(eval_stats(tracker.graph(), model, attrs));
      counts_.push_back(0.0);
    }
    counts_[it->second] += 1.0;
  };
  record();
  const std::uint64_t total = std::uint64_t{1} << d;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
    tracker.toggle(dyads[bit].u, dyads[bit].v);
    record();
  }
}

double ExactDistribution::log_normalizer(const ThetaVector& theta) const {
  double max_eta = -std::numeric_limits<double>::infinity();
  std::vector<double> eta(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    eta[k] = std::log(counts_[k]) + theta.dot(values_[k]);
    max_eta = std::max(max_eta, eta[k]);
  }
  double sum = 0.0;
  for (double e : eta) sum += std::exp(e - max_eta);
  return max_eta + std::log(sum);
}

std::vector<double> ExactDistribution::probabilities(const ThetaVector& theta) const {
  const double log_kappa = log_normalizer(theta);
  std::vector<double> prob(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    prob[k] = std::exp(std::log(counts_[k]) + theta.dot(values_[k]) - log_kappa);
  }
  return prob;
}

StatVector ExactDistribution::mean(const ThetaVector& theta) const {
  const auto prob = probabilities(theta);
  StatVector m = StatVector::Zero(values_.front().size());
  for (std::size_t k = 0; k < values_.size(); ++k) m += prob[k] * values_[k];
  return m;
}

Eigen::MatrixXd ExactDistribution::covariance(const ThetaVector& theta) const {
  const auto prob = probabilities(theta);
  const StatVector m = mean(theta);
  const auto p = m.size();
  MatrixXd c = MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const VectorXd d = values_[k] - m;
    c += prob[k] * d * d.transpose();
  }
  return c;
}

double exact_loglik(const ThetaVector& theta, const Graph& g, const ModelSpec& model, const NodeAttributes* attrs,
                    int limit) {
  check_dimension(theta, model);
  const ExactDistribution dist(g.num_nodes(), model, attrs, limit);
  return theta.dot(eval_stats(g, model, attrs)) - dist.log_normalizer(theta);
}

FitResult exact_mle(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs, int limit) {
  const ExactDistribution dist(g.num_nodes(), model, attrs, limit);
  const StatVector observed = eval_stats(g, model, attrs);
  const auto p = static_cast<Eigen::Index>(model.size());
  auto loglik = [&](const ThetaVector& th) { return th.dot(observed) - dist.log_normalizer(th); };

  FitResult out;
  out.method = EstimationMethod::Exact;
  ThetaVector theta = ThetaVector::Zero(p);
  double ll = loglik(theta);
  MatrixXd cov = dist.covariance(theta);
  for (int it = 0; it < 500; ++it) {
    const VectorXd grad = observed - dist.mean(theta);
    cov = dist.covariance(theta);
    const VectorXd step = solve_min_norm(cov, grad);
    if (grad.norm() < 1e-10 && step.norm() < 1e-6 * (1.0 + theta.norm())) {
      out.converged = true;
      break;
    }
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const ThetaVector trial = theta + scale * step;
      const double lt = loglik(trial);
      if (std::isfinite(lt) && lt >= ll - 1e-13 * std::abs(ll)) {
        theta = trial;
        ll = lt;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  out.theta = theta;
  out.log_likelihood = ll;
  out.std_errors = pinv_diagonal_sqrt(cov);
  const VectorXd eig = Eigen::SelfAdjointEigenSolver<MatrixXd>(cov, Eigen::EigenvaluesOnly).eigenvalues();
  if (out.converged && !(eig.minCoeff() > kPinvTolerance * eig.maxCoeff())) {
    out.converged = false;
    out.message = "exact MLE does not exist or is not unique: the information matrix is singular "
                  "(observed statistics on the boundary of the support, or collinear terms)";
  } else if (!out.converged) {
    out.message = "exact MLE did not converge (observed statistics may lie on the boundary of the support)";
  }
  return out;
}

FitResult fit(const Graph& g, const ModelSpec& model, const EstimatorConfig& config, const NodeAttributes* attrs) {
  switch (config.method) {
    case EstimationMethod::Mple: return mple(g, model, attrs);
    case EstimationMethod::McmcMle: return mcmc_mle(g, model, config, attrs);
    case EstimationMethod::Exact: return exact_mle(g, model, attrs, config.exact_limit);
  }
  throw ConfigError("unknown estimation method");
}

}  // namespace brainergm
