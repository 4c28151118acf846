#pragma once

#include <stdexcept>
#include <string>

namespace enclosure {

// Base class for every library error. The three subfamilies map onto the
// CLI exit codes: ConfigError -> 2, NumericError -> 3, InputError -> 4.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct InputError : Error {
  using Error::Error;
};

// geometry
struct NonRegularDirection : NumericError {
  using NumericError::NumericError;
};
struct DegenerateCone : NumericError {
  using NumericError::NumericError;
};
struct CollinearInput : NumericError {
  using NumericError::NumericError;
};
struct EmptyIntersection : NumericError {
  using NumericError::NumericError;
};
struct InsufficientDirections : NumericError {
  using NumericError::NumericError;
};
struct DegeneratePolygon : NumericError {
  using NumericError::NumericError;
};

// special functions / probes
struct DomainError : NumericError {
  using NumericError::NumericError;
};
struct OriginEvaluation : NumericError {
  using NumericError::NumericError;
};

// quadrature
struct UnsupportedOrder : ConfigError {
  using ConfigError::ConfigError;
};

// forward synthesis
struct EvaluationInsideSource : NumericError {
  using NumericError::NumericError;
};
struct ClearanceViolation : NumericError {
  using NumericError::NumericError;
};

// indicators
struct WavenumberMismatch : NumericError {
  using NumericError::NumericError;
};
struct UnderResolvedRule : NumericError {
  using NumericError::NumericError;
};

// support fits
struct InsufficientSamples : NumericError {
  using NumericError::NumericError;
};
struct SaturatedSamples : NumericError {
  using NumericError::NumericError;
};

// interior field solves
struct ContractionViolated : NumericError {
  using NumericError::NumericError;
};
struct MaxIterationsExceeded : NumericError {
  using NumericError::NumericError;
};

// configuration / files
struct ConfigInvalid : ConfigError {
  using ConfigError::ConfigError;
};
struct MissingInput : InputError {
  using InputError::InputError;
};

}  // namespace enclosure
