#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace beamdecay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem statement violates one of the hypotheses it must satisfy.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem file, CSV, or report.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inputs produced from different problems were combined.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

/// Newton non-convergence, singular pivots, or non-finite values.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::optional<std::size_t> step = std::nullopt,
              double last_residual = 0.0)
      : Error(what), step_(step), last_residual_(last_residual) {}

  std::optional<std::size_t> step() const noexcept { return step_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  std::optional<std::size_t> step_;
  double last_residual_;
};

}  // namespace beamdecay
