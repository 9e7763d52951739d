#include "surfhelm/solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <sstream>

#include "surfhelm/errors.hpp"

namespace surfhelm {

SolveResult solve(const ComplexSparseSystem& system) {
  const Eigen::Index n = system.dim();
  if (n < 1 || system.matrix.cols() != n || system.rhs.size() != n) {
    throw Error(ErrorKind::InvalidConfig, "system must be square with a matching right-hand side");
  }
  SolveResult result;
  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0) {
    result.solution = ComplexVector::Zero(n);
    return result;
  }

  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, "sparse LU breakdown: " + lu.lastErrorMessage());
  }
  result.factor_nonzeros = lu.nnzL() + lu.nnzU();
  result.solution = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !result.solution.allFinite()) {
    throw Error(ErrorKind::SingularSystem, "sparse LU solve produced non-finite values");
  }

  ComplexVector residual = system.rhs - system.matrix * result.solution;
  result.relative_residual = residual.norm() / bnorm;
  while (result.relative_residual > 0.1 * kResidualTolerance && result.refinement_steps < 3) {
    result.solution += lu.solve(residual);
    residual = system.rhs - system.matrix * result.solution;
    result.relative_residual = residual.norm() / bnorm;
    ++result.refinement_steps;
  }
  if (!(result.relative_residual <= kResidualTolerance)) {
    std::ostringstream os;
    os << "relative residual " << result.relative_residual << " > " << kResidualTolerance;
    throw Error(ErrorKind::ResidualNotMet, os.str());
  }
  return result;
}

}  // namespace surfhelm
