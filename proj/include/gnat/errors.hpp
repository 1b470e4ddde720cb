#pragma once
#include <stdexcept>
#include <string>

namespace gnat {

// Mathematical precondition failures. The CLI maps these to exit code 2;
// anything else escaping a command is treated as an internal error.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct ParameterError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct DegenerateMetricError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct NotApplicableError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct ModelError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct ConstructionError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct DimensionError : PreconditionError {
  using PreconditionError::PreconditionError;
};

}  // namespace gnat
