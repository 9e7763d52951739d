#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surfhelm {

enum class ErrorKind {
  // configuration
  InvalidConfig,
  InvalidBox,
  UnsupportedDegree,
  InsufficientData,
  // geometry
  DegenerateGradient,
  ProjectionDiverged,
  OutsideTubularNeighborhood,
  NotOnSurface,
  EmptyActiveSet,
  NoCut,
  // linear algebra
  SingularSystem,
  ResidualNotMet,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Coarse grouping used by the command-line driver for its exit codes.
enum class ErrorCategory { Config, Geometry, Solver };

ErrorCategory category(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace surfhelm
