#pragma once

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Sparse>

#include "surfhelm/cut.hpp"
#include "surfhelm/fields.hpp"
#include "surfhelm/geometry.hpp"
#include "surfhelm/mesh.hpp"

namespace surfhelm {

using Complex = std::complex<double>;
using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Selects how the stabilized mass coefficient is formed. The load weight
/// is (1 − γ_s h²k²) in both cases.
enum class MassCoefficient {
  /// k²(1 − γ_s h²)
  Literal,
  /// k²(1 − γ_s h²k²)
  FromDefinition,
};

#ifdef SURFHELM_MASS_COEFFICIENT_FROM_DEFINITION
inline constexpr MassCoefficient kDefaultMassCoefficient = MassCoefficient::FromDefinition;
#else
inline constexpr MassCoefficient kDefaultMassCoefficient = MassCoefficient::Literal;
#endif

struct StabilizationParams {
  Complex gamma_s{0.0, 1.0};
  Complex gamma_j{0.0, 1e-3};
  double k = 1.0;
  MassCoefficient mass_coefficient = kDefaultMassCoefficient;

  /// γ_s = i·gs_im, γ_j = i·gj_im. Throws InvalidConfig unless both
  /// imaginary parts are positive.
  static StabilizationParams stabilized(double k, double gamma_s_im = 1.0, double gamma_j_im = 1e-3);
  /// γ_s = γ_j = 0, plain Galerkin.
  static StabilizationParams unstabilized(double k);

  bool is_stabilized() const noexcept { return gamma_s != 0.0 || gamma_j != 0.0; }
  double k2() const noexcept { return k * k; }

  /// Throws InvalidConfig if the invariant Im γ > 0 (or both exactly zero) fails.
  void validate() const;
};

/// Stabilized system matrix and load vector over the active dofs.
struct ComplexSparseSystem {
  ComplexSparse matrix;
  ComplexVector rhs;
  /// Global mesh size used in the least-squares weight.
  double h = 0.0;

  Eigen::Index dim() const noexcept { return matrix.rows(); }
};

/// Real building blocks of the discrete operator; reusable across k and γ.
struct SystemComponents {
  RealSparse stiffness;
  RealSparse mass;
  RealSparse jump;
  double h = 0.0;
};

/// Surface function evaluated at points of the exact surface.
using SurfaceFunction = std::function<double(const Vec3&)>;

/// Σ_K ∫ (P_h∇φ_j)·(P_h∇φ_i) over the cut cells.
RealSparse assemble_stiffness(const ActiveMesh& active, std::span<const SurfaceCell> cells);

/// Σ_K ∫ φ_j φ_i over the cut cells (exact degree-2 quadrature).
RealSparse assemble_surface_mass(const ActiveMesh& active, std::span<const SurfaceCell> cells);

/// Σ_F |F| (n_F·[∇φ_j]) (n_F·[∇φ_i]) over the internal faces of the active mesh.
RealSparse assemble_jump(const ActiveMesh& active);

/// ∫_{Σ_h} f(p(x)) φ_i(x) with degree-4 quadrature and closest-point extension.
/// Geometry failures are rethrown with the offending quadrature point.
RealVector assemble_load(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                         const SurfaceFunction& f, const LevelSetSurface& surface);

/// Max diameter over the active tetrahedra.
double active_mesh_size(const ActiveMesh& active);

SystemComponents assemble_components(const ActiveMesh& active, std::span<const SurfaceCell> cells);

/// S − k²·c·M + γ_j J and (1 − γ_s h²k²)·load, with c = 1 − γ_s h² (Literal)
/// or 1 − γ_s h²k² (FromDefinition).
ComplexSparseSystem combine(const SystemComponents& parts, const RealVector& load,
                            const StabilizationParams& params);

ComplexSparseSystem assemble_system(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                                    const StabilizationParams& params, const SurfaceFunction& f,
                                    const LevelSetSurface& surface);

ComplexSparseSystem assemble_system(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                                    const StabilizationParams& params, const AmbientScalarField& f,
                                    const LevelSetSurface& surface);

/// Values of the P1 hat functions of tetrahedron `points` at x.
Eigen::Vector4d barycentric_coordinates(const std::array<Vec3, 4>& points, const Vec3& x);

}  // namespace surfhelm
