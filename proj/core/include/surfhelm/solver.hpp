#pragma once

#include "surfhelm/fem.hpp"

namespace surfhelm {

struct SolveResult {
  ComplexVector solution;
  /// ‖Ax − b‖₂ / ‖b‖₂ (0 for b = 0).
  double relative_residual = 0.0;
  /// Nonzeros of the L and U factors.
  Eigen::Index factor_nonzeros = 0;
  /// Iterative-refinement sweeps applied after the first solve.
  int refinement_steps = 0;
};

inline constexpr double kResidualTolerance = 1e-8;

/// Sparse LU (COLAMD ordering, partial pivoting) with up to three steps of
/// iterative refinement. Throws SingularSystem on factorization breakdown
/// and ResidualNotMet if the residual stays above kResidualTolerance.
SolveResult solve(const ComplexSparseSystem& system);

}  // namespace surfhelm
