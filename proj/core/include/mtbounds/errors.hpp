#pragma once

#include <stdexcept>
#include <string>

namespace mtbounds {

// Error families map onto distinct CLI exit codes; see tools/.

/// Malformed input file (bad row, bad status/outcome/reason combination).
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

/// Panel failed validation (death absorption / outcome monotonicity) and the
/// caller asked for validation to block.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: unknown reason label, inconsistent horizons, bad ladder.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Estimation cannot proceed on this data (e.g. no survivors at the target wave).
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

/// Interval construction failed (e.g. every candidate on one side is vacuous).
class InferenceError : public std::runtime_error {
 public:
  explicit InferenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtbounds
