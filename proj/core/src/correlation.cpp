#include "brainergm/correlation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "brainergm/error.hpp"
#include "brainergm/numfmt.hpp"

namespace brainergm {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  const auto n = values_.rows();
  if (values_.cols() != n) {
    throw DataError("correlation matrix must be square, got " + std::to_string(n) + "x" +
                    std::to_string(values_.cols()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = values_(i, j);
      const double b = values_(j, i);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DataError("non-finite correlation at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      if (std::abs(a - b) > kSymmetryTolerance) {
        throw DataError("correlation matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                        "): " + format_number(a) + " vs " + format_number(b));
      }
      double v = 0.5 * (a + b);
      if (std::abs(v) > 1.0 + kSymmetryTolerance) {
        throw DataError("correlation " + format_number(v) + " outside [-1, 1] at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      v = std::clamp(v, -1.0, 1.0);
      values_(i, j) = v;
      values_(j, i) = v;
    }
    values_(i, i) = 1.0;
  }
}

CorrelationMatrix load_correlation(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string cell =
          trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      double value = 0.0;
      const char* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
      if (cell.empty() || ec != std::errc() || ptr != end) {
        throw ParseError(line_no, "invalid number '" + cell + "'");
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(line_no, "expected " + std::to_string(rows.front().size()) + " columns, got " +
                                    std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(line_no, "empty correlation matrix");
  if (rows.size() != rows.front().size()) {
    throw ParseError(line_no, "matrix has " + std::to_string(rows.size()) + " rows and " +
                                  std::to_string(rows.front().size()) + " columns");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return CorrelationMatrix(std::move(m));
}

CorrelationMatrix load_correlation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open correlation file " + path.string());
  return load_correlation(in);
}

void save_correlation(const CorrelationMatrix& m, std::ostream& out) {
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void save_correlation(const CorrelationMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write correlation file " + path.string());
  save_correlation(m, out);
}

std::string to_string(ThresholdMode m) { return m == ThresholdMode::Density ? "density" : "fixed"; }

ThresholdMode threshold_mode_from_string(const std::string& s) {
  if (s == "density") return ThresholdMode::Density;
  if (s == "fixed") return ThresholdMode::Fixed;
  throw ConfigError("unknown threshold mode '" + s + "' (expected density or fixed)");
}

void ThresholdConfig::validate() const {
  if (mode == ThresholdMode::Density && !(s > 1.0)) throw ConfigError("density exponent s must be > 1");
  if (mode == ThresholdMode::Fixed && !(value >= -1.0 && value <= 1.0)) {
    throw ConfigError("fixed threshold must lie in [-1, 1]");
  }
}

std::int64_t target_edge_count(int n, double s) {
  if (!(s > 1.0)) throw ConfigError("density exponent s must be > 1");
  if (n < 2) throw DataError("thresholding needs n >= 2");
  const double k = std::pow(static_cast<double>(n), 1.0 / s);
  const auto e = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * k / 2.0 - 1e-9));
  const auto dyads = static_cast<std::int64_t>(n) * (n - 1) / 2;
  return std::min(e, dyads);
}

Graph threshold_to_density(const CorrelationMatrix& corr, double s) {
  const int n = corr.size();
  const std::int64_t e = target_edge_count(n, s);
  if (e <= 0) throw DataError("density rule gives E = 0 edges");
  std::vector<std::tuple<double, int, int>> dyads;
  dyads.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dyads.emplace_back(corr(i, j), i, j);
  const auto cut = dyads.begin() + e;
  std::partial_sort(dyads.begin(), cut, dyads.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  Graph g(n);
  for (auto it = dyads.begin(); it != cut; ++it) g.add_edge(std::get<1>(*it), std::get<2>(*it));
  return g;
}

Graph threshold_fixed(const CorrelationMatrix& corr, double value) {
  const int n = corr.size();
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (corr(i, j) >= value) g.add_edge(i, j);
  return g;
}

Graph threshold(const CorrelationMatrix& corr, const ThresholdConfig& config) {
  config.validate();
  return config.mode == ThresholdMode::Density ? threshold_to_density(corr, config.s)
                                               : threshold_fixed(corr, config.value);
}

CorrelationMatrix implied_correlation(const Graph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    m(e.u, e.v) = 1.0;
    m(e.v, e.u) = 1.0;
  }
  return CorrelationMatrix(std::move(m));
}

std::string to_string(GroupMode m) { return m == GroupMode::Mean ? "mean" : "median"; }

GroupMode group_mode_from_string(const std::string& s) {
  if (s == "mean") return GroupMode::Mean;
  if (s == "median") return GroupMode::Median;
  throw ConfigError("unknown group mode '" + s + "' (expected mean or median)");
}

double summarize(std::vector<double> values, GroupMode mode) {
  if (values.empty()) throw ConfigError("cannot summarize an empty sample");
  if (mode == GroupMode::Mean) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

CorrelationMatrix group_correlation_matrix(const std::vector<CorrelationMatrix>& matrices, GroupMode mode) {
  if (matrices.size() < 2) throw DataError("group networks need at least two subject matrices");
  const int n = matrices.front().size();
  for (std::size_t s = 1; s < matrices.size(); ++s) {
    if (matrices[s].size() != n) {
      throw DataError("subject matrix " + std::to_string(s) + " has n=" + std::to_string(matrices[s].size()) +
                      ", expected " + std::to_string(n));
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> cell(matrices.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (std::size_t s = 0; s < matrices.size(); ++s) cell[s] = matrices[s](i, j);
      out(i, j) = out(j, i) = summarize(cell, mode);
    }
  }
  return CorrelationMatrix(std::move(out));
}

Graph group_correlation_network(const std::vector<CorrelationMatrix>& matrices, GroupMode mode,
                                const ThresholdConfig& config) {
  return threshold(group_correlation_matrix(matrices, mode), config);
}

}  // namespace brainergm
