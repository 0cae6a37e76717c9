#pragma once

#include <stdexcept>
#include <string>

namespace meridian {

// A numeric argument violates a documented precondition.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// User-supplied input (profile spec, curve file, CLI argument) fails validation.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An internal cross-check failed; indicates a bug upstream of the check.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// The eigensolver or a root finder cannot deliver at the requested resolution.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate geometry: zero-length curves, vanishing trial functions.
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace meridian
