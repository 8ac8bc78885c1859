#pragma once

#include <stdexcept>
#include <string>

namespace mlswe {

/// Invalid user input: grid extents, layer regions, boundary setup, CLI/config values.
/// Maps to process exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Layer layout violates the compatibility or adjacency constraints.
class LayoutError : public ConfigError {
 public:
  explicit LayoutError(const std::string& what) : ConfigError(what) {}
};

/// Runtime failure of the numerical solver. Maps to process exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Water column thinner than the configured minimum depth.
class DryingError : public SolverError {
 public:
  explicit DryingError(const std::string& what) : SolverError(what) {}
};

/// Turbulence/friction closure evaluated outside its validity range.
class ClosureError : public SolverError {
 public:
  explicit ClosureError(const std::string& what) : SolverError(what) {}
};

/// Zero or near-zero pivot met while solving a tridiagonal system.
class SingularSystemError : public SolverError {
 public:
  explicit SingularSystemError(const std::string& what) : SolverError(what) {}
};

}  // namespace mlswe
