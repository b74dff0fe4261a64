#pragma once

#include <stdexcept>
#include <string>

namespace rarc {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of vectors or matrices do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Non-finite input or a numerically meaningless request.
class NumericError : public Error {
 public:
  using Error::Error;
};

// An iterative inner solver did not converge.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Malformed configuration text, unknown keys or unknown names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rarc
