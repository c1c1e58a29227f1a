// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dagsobol {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad request: malformed arguments, impossible configuration. CLI exit code 2.
struct UsageError : Error {
  using Error::Error;
};

/// Problem with the supplied graph, dataset, or process spec. CLI exit code 3.
struct DataError : Error {
  using Error::Error;
};

/// Numerical breakdown while computing. CLI exit code 4.
struct NumericalError : Error {
  using Error::Error;
};

struct DuplicateNodeError : DataError {
  using DataError::DataError;
};
struct UnknownEndpointError : DataError {
  using DataError::DataError;
};
struct CycleError : DataError {
  using DataError::DataError;
};
struct UnknownNodeError : DataError {
  using DataError::DataError;
};
struct OutputIsSourceError : DataError {
  using DataError::DataError;
};
struct MissingColumnError : DataError {
  using DataError::DataError;
};
struct InsufficientDataError : DataError {
  using DataError::DataError;
};
struct DegenerateDistributionError : DataError {
  using DataError::DataError;
};
struct IoError : DataError {
  using DataError::DataError;
};

/// Too few rows for a least-squares subproblem; carries the required count.
struct UnderdeterminedError : DataError {
  UnderdeterminedError(const std::string& subproblem, std::size_t required,
                       std::size_t provided)
      : DataError(subproblem + ": requires at least " + std::to_string(required) +
                  " observations, got " + std::to_string(provided)),
        subproblem(subproblem),
        required(required),
        provided(provided) {}
  std::string subproblem;
  std::size_t required;
  std::size_t provided;
};

struct NonFiniteInputError : NumericalError {
  using NumericalError::NumericalError;
};
struct MomentOverflowError : NumericalError {
  using NumericalError::NumericalError;
};
struct ZeroVarianceError : NumericalError {
  using NumericalError::NumericalError;
};
struct EvaluationFailureError : NumericalError {
  using NumericalError::NumericalError;
};
struct ProjectionRankDeficientError : NumericalError {
  using NumericalError::NumericalError;
};
struct OverflowError : NumericalError {
  using NumericalError::NumericalError;
};
struct AllMonomialsDegenerateError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace dagsobol
