#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "surfhelm/cut.hpp"
#include "surfhelm/fem.hpp"
#include "surfhelm/fields.hpp"
#include "surfhelm/geometry.hpp"
#include "surfhelm/mesh.hpp"

namespace surfhelm {

/// Δ_Σu = Δu − nᵀ(∇²u)n − (∇·n)(n·∇u) at an on-surface point.
/// Throws NotOnSurface if x is farther than 1e-10·diameter from the zero set.
double surface_laplacian(const AmbientScalarField& u, const LevelSetSurface& surface, const Vec3& x);

/// Exact solution u on a surface together with the forcing it induces.
struct ManufacturedCase {
  AmbientScalarField u;
  LevelSetSurface surface;
  double k2 = 1.0;

  /// f = −Δ_Σu − k²u at an on-surface point.
  double forcing(const Vec3& x) const;
  SurfaceFunction forcing_function() const;
};

double forcing(const ManufacturedCase& mms, const Vec3& x);

struct ErrorNorms {
  double l2 = 0.0;
  /// ‖P_h(∇u^e − ∇u_h)‖ on Σ_h.
  double h1t = 0.0;
  /// (h1t² + k² l2²)^½
  double energy = 0.0;
};

/// Errors of u_h against u^e = u∘p on Σ_h, with degree-4 quadrature.
ErrorNorms error_norms(const ComplexVector& uh, const ManufacturedCase& mms, const ActiveMesh& active,
                       std::span<const SurfaceCell> cells);

/// u(p(x_v)) at every active vertex.
RealVector interpolate_extension(const AmbientScalarField& u, const LevelSetSurface& surface,
                                 const ActiveMesh& active);

/// (∫_{Σ_h} |f(p(x))|²)^½ with degree-4 quadrature.
double extended_l2_norm(const SurfaceFunction& f, const LevelSetSurface& surface,
                        std::span<const SurfaceCell> cells);

/// (v̄ᵀ M v)^½
double mass_norm(const RealSparse& mass, const ComplexVector& v);

struct ConvergenceEntry {
  double h = 0.0;
  std::size_t ndof = 0;
  ErrorNorms errors;
};

struct RateSlopes {
  double l2 = 0.0;
  double h1t = 0.0;
  double energy = 0.0;
};

/// Refinement history for one (surface, k²) pair.
class ConvergenceRecord {
 public:
  /// Throws InvalidConfig unless h strictly decreases.
  void add(const ConvergenceEntry& entry);
  const std::vector<ConvergenceEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Columns h, ndof, err_l2, err_h1t, err_energy; round-trip precision.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<ConvergenceEntry> entries_;
};

/// Least-squares slope of log(error) against log(h).
/// Throws InsufficientData with fewer than three points.
double fit_slope(std::span<const double> h, std::span<const double> error);
RateSlopes fit_rates(const ConvergenceRecord& record);

}  // namespace surfhelm
