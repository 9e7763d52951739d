#include "surfhelm/errors.hpp"

namespace surfhelm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidBox: return "InvalidBox";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateGradient: return "DegenerateGradient";
    case ErrorKind::ProjectionDiverged: return "ProjectionDiverged";
    case ErrorKind::OutsideTubularNeighborhood: return "OutsideTubularNeighborhood";
    case ErrorKind::NotOnSurface: return "NotOnSurface";
    case ErrorKind::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorKind::NoCut: return "NoCut";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ResidualNotMet: return "ResidualNotMet";
  }
  return "Unknown";
}

ErrorCategory category(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidBox:
    case ErrorKind::UnsupportedDegree:
    case ErrorKind::InsufficientData:
      return ErrorCategory::Config;
    case ErrorKind::SingularSystem:
    case ErrorKind::ResidualNotMet:
      return ErrorCategory::Solver;
    default:
      return ErrorCategory::Geometry;
  }
}

}  // namespace surfhelm
