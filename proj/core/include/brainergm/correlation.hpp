#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "brainergm/graph.hpp"

namespace brainergm {

inline constexpr double kDefaultDensityExponent = 2.8;

/// Symmetric matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  /// Throws DataError for a non-square, non-symmetric (beyond 1e-9) or
  /// non-finite matrix, or for off-diagonal entries outside [-1, 1].
  /// The diagonal is set to exactly 1.
  explicit CorrelationMatrix(Eigen::MatrixXd values);

  int size() const noexcept { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

 private:
  Eigen::MatrixXd values_;
};

// n rows of n comma-separated numbers; blank lines and '#' comments skipped.
CorrelationMatrix load_correlation(std::istream& in);
CorrelationMatrix load_correlation(const std::filesystem::path& path);
void save_correlation(const CorrelationMatrix& m, std::ostream& out);
void save_correlation(const CorrelationMatrix& m, const std::filesystem::path& path);

enum class ThresholdMode { Density, Fixed };

std::string to_string(ThresholdMode m);
ThresholdMode threshold_mode_from_string(const std::string& s);

struct ThresholdConfig {
  ThresholdMode mode = ThresholdMode::Density;
  // Density rule: mean degree K = n^(1/s).
  double s = kDefaultDensityExponent;
  // Fixed rule: keep dyads with correlation >= value.
  double value = 0.5;

  void validate() const;
};

/// ceil(n K / 2) with K = n^(1/s), capped at the number of dyads.
std::int64_t target_edge_count(int n, double s);

/// Keeps the target_edge_count(n, s) largest upper-triangle entries. Ties are
/// ordered by value descending, then i, then j ascending.
Graph threshold_to_density(const CorrelationMatrix& corr, double s = kDefaultDensityExponent);
Graph threshold_fixed(const CorrelationMatrix& corr, double value);
Graph threshold(const CorrelationMatrix& corr, const ThresholdConfig& config);

/// 1 on edges and the diagonal, 0 elsewhere.
CorrelationMatrix implied_correlation(const Graph& g);

enum class GroupMode { Mean, Median };

std::string to_string(GroupMode m);
GroupMode group_mode_from_string(const std::string& s);

/// Mean or median of a sample; an even-sized median is the midpoint average.
double summarize(std::vector<double> values, GroupMode mode);

/// Element-wise mean or median over subjects (at least two, same size).
CorrelationMatrix group_correlation_matrix(const std::vector<CorrelationMatrix>& matrices, GroupMode mode);
Graph group_correlation_network(const std::vector<CorrelationMatrix>& matrices, GroupMode mode,
                                const ThresholdConfig& config = {});

}  // namespace brainergm
