#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace brainergm {

// Root of every error raised by the library. `stage()` names the module that
// produced it so front ends can print stage-labeled diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class InvalidDyadError : public Error {
 public:
  explicit InvalidDyadError(const std::string& what) : Error("graph", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("io", "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// Input matrices that are not valid correlation matrices.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error("data", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("model", what) {}
};

class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error("metrics", what) {}
};

class SamplerError : public Error {
 public:
  explicit SamplerError(const std::string& what) : Error("sampler", what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what) : Error("estimator", what) {}
};

// Simulated statistics collapsed (empty/complete graphs or a constant term).
class DegeneracyError : public EstimationError {
 public:
  DegeneracyError(std::string term, const std::string& what)
      : EstimationError(what), term_(std::move(term)) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

class SelectionError : public Error {
 public:
  explicit SelectionError(const std::string& what) : Error("selection", what) {}
};

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what) : Error(std::move(stage), what) {}
};

}  // namespace brainergm
