#include "surfhelm/mms.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "surfhelm/errors.hpp"

namespace surfhelm {

double surface_laplacian(const AmbientScalarField& u, const LevelSetSurface& surface, const Vec3& x) {
  if (surface.distance_estimate(x) > 1e-10 * surface.diameter()) {
    std::ostringstream os;
    os << "(" << x.transpose() << ") is not on the surface";
    throw Error(ErrorKind::NotOnSurface, os.str());
  }
  const Vec3 n = unit_normal(surface, x);
  const Mat3 hess = u.hessian(x);
  return hess.trace() - n.dot(hess * n) - mean_curvature_divergence(surface, x) * n.dot(u.gradient(x));
}

double ManufacturedCase::forcing(const Vec3& x) const {
  return -surface_laplacian(u, surface, x) - k2 * u(x);
}

SurfaceFunction ManufacturedCase::forcing_function() const {
  return [this](const Vec3& x) { return forcing(x); };
}

double forcing(const ManufacturedCase& mms, const Vec3& x) { return mms.forcing(x); }

ErrorNorms error_norms(const ComplexVector& uh, const ManufacturedCase& mms, const ActiveMesh& active,
                       std::span<const SurfaceCell> cells) {
  if (static_cast<std::size_t>(uh.size()) != active.num_dofs() || cells.size() != active.tets.size()) {
    throw Error(ErrorKind::InvalidConfig, "solution and geometry come from different runs");
  }
  const BackgroundMesh& mesh = *active.mesh;
  double l2sq = 0.0;
  double h1sq = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const SurfaceCell& cell = cells[a];
    const auto points = mesh.tet_points(cell.tet);
    const auto grads = barycentric_gradients(points);
    const auto dofs = active.tet_dofs(a);
    Eigen::Vector3cd grad_uh = Eigen::Vector3cd::Zero();
    for (std::size_t i = 0; i < 4; ++i) grad_uh += uh[dofs[i]] * grads[i].cast<Complex>();
    const Mat3 proj = Mat3::Identity() - cell.normal * cell.normal.transpose();

    for (const auto& qp : quadrature_on_cell(cell, 4)) {
      const ClosestPointMap cp = closest_point_with_jacobian(mms.surface, qp.x);
      const Eigen::Vector4d phi = barycentric_coordinates(points, qp.x);
      Complex uh_x = 0.0;
      for (std::size_t i = 0; i < 4; ++i) uh_x += uh[dofs[i]] * phi[static_cast<Eigen::Index>(i)];
      const double ue = mms.u(cp.point);
      const Vec3 grad_ue = cp.jacobian.transpose() * mms.u.gradient(cp.point);
      const Eigen::Vector3cd diff = proj.cast<Complex>() * (grad_ue.cast<Complex>() - grad_uh);
      l2sq += qp.weight * std::norm(ue - uh_x);
      h1sq += qp.weight * diff.squaredNorm();
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(l2sq);
  out.h1t = std::sqrt(h1sq);
  out.energy = std::sqrt(h1sq + mms.k2 * l2sq);
  return out;
}

RealVector interpolate_extension(const AmbientScalarField& u, const LevelSetSurface& surface,
                                 const ActiveMesh& active) {
  RealVector values(static_cast<Eigen::Index>(active.num_dofs()));
  for (std::size_t d = 0; d < active.num_dofs(); ++d) {
    values[static_cast<Eigen::Index>(d)] =
        u(closest_point(surface, active.mesh->vertex(active.vertex_of_dof[d])));
  }
  return values;
}

double extended_l2_norm(const SurfaceFunction& f, const LevelSetSurface& surface,
                        std::span<const SurfaceCell> cells) {
  double sum = 0.0;
  for (const SurfaceCell& cell : cells) {
    for (const auto& qp : quadrature_on_cell(cell, 4)) {
      const double v = f(closest_point(surface, qp.x));
      sum += qp.weight * v * v;
    }
  }
  return std::sqrt(sum);
}

double mass_norm(const RealSparse& mass, const ComplexVector& v) {
  const Complex q = v.dot(mass.cast<Complex>() * v);  // dot conjugates its first argument
  return std::sqrt(std::max(0.0, q.real()));
}

void ConvergenceRecord::add(const ConvergenceEntry& entry) {
  if (!entries_.empty() && !(entry.h < entries_.back().h)) {
    throw Error(ErrorKind::InvalidConfig, "mesh sizes in a convergence record must strictly decrease");
  }
  entries_.push_back(entry);
}

void ConvergenceRecord::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "h,ndof,err_l2,err_h1t,err_energy\n";
  for (const auto& e : entries_) {
    os << e.h << ',' << e.ndof << ',' << e.errors.l2 << ',' << e.errors.h1t << ',' << e.errors.energy
       << '\n';
  }
  os.precision(old_precision);
}

double fit_slope(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size()) {
    throw Error(ErrorKind::InvalidConfig, "fit_slope: size mismatch");
  }
  if (h.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "at least three refinement levels are needed");
  }
  const auto n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RateSlopes fit_rates(const ConvergenceRecord& record) {
  std::vector<double> h, l2, h1, en;
  for (const auto& e : record.entries()) {
    h.push_back(e.h);
    l2.push_back(e.errors.l2);
    h1.push_back(e.errors.h1t);
    en.push_back(e.errors.energy);
  }
  return {fit_slope(h, l2), fit_slope(h, h1), fit_slope(h, en)};
}

}  // namespace surfhelm
