#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brainergm/graph.hpp"
#include "brainergm/terms.hpp"

namespace brainergm {

enum class EstimationMethod { Mple, McmcMle, Exact };

std::string to_string(EstimationMethod m);
EstimationMethod estimation_method_from_string(const std::string& s);

struct EstimatorConfig {
  EstimationMethod method = EstimationMethod::McmcMle;

  // MCMC MLE: statistics retained per iteration, burn-in of each iteration's
  // chain (started at the observed graph), and proposals between retained samples.
  std::size_t sample_size = 4096;
  std::int64_t burn_in = 131'072;
  std::int64_t interval = 256;
  int max_iterations = 20;
  double t_ratio_threshold = 0.1;

  // Damped fallback update theta += a_t C^-1 (g_obs - mean), a_t = a0 t0 / (t + t0).
  double gain_a0 = 0.1;
  double gain_t0 = 10.0;
  double ridge = 1e-6;

  // Abort when more than this fraction of simulated graphs is empty or complete.
  double degeneracy_fraction = 0.95;

  std::uint64_t seed = 0;
  int exact_limit = 6;

  // Starting point for MCMC MLE; the MPLE when unset.
  std::optional<ThetaVector> initial_theta;

  void validate() const;
};

struct McmcDiagnostics {
  Eigen::VectorXd t_ratios;  // |mean simulated - observed| / simulated sd
  int iterations = 0;
  std::size_t sample_size = 0;
  double acceptance_rate = 0.0;
  int fallback_updates = 0;
};

struct FitResult {
  EstimationMethod method = EstimationMethod::Mple;
  ThetaVector theta;
  Eigen::VectorXd std_errors;
  bool converged = false;
  std::string message;
  std::optional<McmcDiagnostics> diagnostics;  // MCMC MLE only
  std::optional<double> log_likelihood;        // exact method only
};

/// Logistic regression of edge indicators on change statistics over all
/// dyads, by Newton / IRLS to gradient norm < 1e-8. Separation (some fitted
/// probability saturates at 0 or 1, e.g. an empty graph) is reported through
/// converged = false and a message; the last iterate is returned.
FitResult mple(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs = nullptr);

/// Monte Carlo MLE started from the MPLE. Each iteration simulates at the
/// current theta from the observed graph and takes a Geyer-Thompson
/// importance-sampling step, shrinking the target toward the sample mean until
/// the weights keep an effective sample size of 5%; a damped stochastic
/// approximation step is the fallback. Converged when every t-ratio is below
/// the threshold; the converged sample then gets one final importance-sampling
/// refinement. Without convergence the iterate with the smallest maximum
/// t-ratio is returned. Throws DegeneracyError when the simulated graphs collapse.
FitResult mcmc_mle(const Graph& g, const ModelSpec& model, const EstimatorConfig& config,
                   const NodeAttributes* attrs = nullptr);

/// Distinct statistic vectors over every graph on n nodes, with multiplicities.
class ExactDistribution {
 public:
  ExactDistribution(int n, const ModelSpec& model, const NodeAttributes* attrs = nullptr, int limit = 6);

  const std::vector<StatVector>& values() const noexcept { return values_; }
  const std::vector<double>& counts() const noexcept { return counts_; }
  int num_nodes() const noexcept { return n_; }

  double log_normalizer(const ThetaVector& theta) const;
  StatVector mean(const ThetaVector& theta) const;
  Eigen::MatrixXd covariance(const ThetaVector& theta) const;
  /// Probability of each distinct statistic vector under theta.
  std::vector<double> probabilities(const ThetaVector& theta) const;

 private:
  int n_;
  std::vector<StatVector> values_;
  std::vector<double> counts_;
};

/// Hard cap on enumeration size regardless of configuration.
inline constexpr int kExactHardCap = 7;

double exact_loglik(const ThetaVector& theta, const Graph& g, const ModelSpec& model,
                    const NodeAttributes* attrs = nullptr, int limit = 6);

/// Newton iteration on the exact log-likelihood to gradient norm < 1e-10.
FitResult exact_mle(const Graph& g, const ModelSpec& model, const NodeAttributes* attrs = nullptr, int limit = 6);

/// Dispatches on config.method.
FitResult fit(const Graph& g, const ModelSpec& model, const EstimatorConfig& config,
              const NodeAttributes* attrs = nullptr);

}  // namespace brainergm
