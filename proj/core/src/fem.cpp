#include "surfhelm/fem.hpp"

#include <sstream>
#include <vector>

#include "surfhelm/errors.hpp"

namespace surfhelm {

StabilizationParams StabilizationParams::stabilized(double k, double gamma_s_im, double gamma_j_im) {
  StabilizationParams p;
  p.k = k;
  p.gamma_s = Complex(0.0, gamma_s_im);
  p.gamma_j = Complex(0.0, gamma_j_im);
  p.validate();
  return p;
}

StabilizationParams StabilizationParams::unstabilized(double k) {
  StabilizationParams p;
  p.k = k;
  p.gamma_s = 0.0;
  p.gamma_j = 0.0;
  p.validate();
  return p;
}

void StabilizationParams::validate() const {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::InvalidConfig, "wave number must be a non-negative real");
  }
  if (gamma_s == 0.0 && gamma_j == 0.0) return;
  if (!(gamma_s.imag() > 0.0) || !(gamma_j.imag() > 0.0)) {
    throw Error(ErrorKind::InvalidConfig,
                "stabilization parameters need positive imaginary parts (or both zero)");
  }
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void check_cells(const ActiveMesh& active, std::span<const SurfaceCell> cells) {
  if (cells.size() != active.tets.size()) {
    throw Error(ErrorKind::InvalidConfig, "surface cells do not match the active mesh");
  }
  for (std::size_t a = 0; a < cells.size(); ++a) {
    if (cells[a].tet != active.tets[a]) {
      throw Error(ErrorKind::InvalidConfig, "surface cells are not in active-mesh order");
    }
  }
}

RealSparse from_triplets(Eigen::Index n, const Triplets& triplets) {
  RealSparse m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Eigen::Vector4d barycentric_coordinates(const std::array<Vec3, 4>& points, const Vec3& x) {
  const auto g = barycentric_gradients(points);
  Eigen::Vector4d lam;
  for (int i = 1; i < 4; ++i) lam[i] = g[static_cast<std::size_t>(i)].dot(x - points[0]);
  lam[0] = 1.0 - lam[1] - lam[2] - lam[3];
  return lam;
}

RealSparse assemble_stiffness(const ActiveMesh& active, std::span<const SurfaceCell> cells) {
  check_cells(active, cells);
  const BackgroundMesh& mesh = *active.mesh;
  Triplets triplets;
  triplets.reserve(16 * cells.size());
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const SurfaceCell& cell = cells[a];
    const auto grads = barycentric_gradients(mesh.tet_points(cell.tet));
    const Mat3 proj = Mat3::Identity() - cell.normal * cell.normal.transpose();
    std::array<Vec3, 4> tangential;
    for (std::size_t i = 0; i < 4; ++i) tangential[i] = proj * grads[i];
    const auto dofs = active.tet_dofs(a);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        triplets.emplace_back(dofs[i], dofs[j], cell.area * tangential[i].dot(tangential[j]));
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(active.num_dofs()), triplets);
}

RealSparse assemble_surface_mass(const ActiveMesh& active, std::span<const SurfaceCell> cells) {
  check_cells(active, cells);
  const BackgroundMesh& mesh = *active.mesh;
  Triplets triplets;
  triplets.reserve(16 * cells.size());
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const SurfaceCell& cell = cells[a];
    const auto points = mesh.tet_points(cell.tet);
    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    for (const auto& qp : quadrature_on_cell(cell, 2)) {
      const Eigen::Vector4d phi = barycentric_coordinates(points, qp.x);
      local += qp.weight * phi * phi.transpose();
    }
    const auto dofs = active.tet_dofs(a);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        triplets.emplace_back(dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)],
                              local(i, j));
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(active.num_dofs()), triplets);
}

RealSparse assemble_jump(const ActiveMesh& active) {
  const BackgroundMesh& mesh = *active.mesh;
  Triplets triplets;
  triplets.reserve(25 * active.faces.size());
  for (const InternalFace& face : active.faces) {
    // Up to five distinct vertices; the "+" side is the tet n_F points into.
    std::array<int, 5> verts{};
    std::array<double, 5> jumps{};
    int count = 0;
    auto slot = [&](int v) {
      for (int s = 0; s < count; ++s) {
        if (verts[static_cast<std::size_t>(s)] == v) return s;
      }
      verts[static_cast<std::size_t>(count)] = v;
      jumps[static_cast<std::size_t>(count)] = 0.0;
      return count++;
    };
    for (int side = 0; side < 2; ++side) {
      const int t = active.tets[static_cast<std::size_t>(face.tets[static_cast<std::size_t>(side)])];
      const Tet& tet = mesh.tets()[static_cast<std::size_t>(t)];
      const auto grads = barycentric_gradients(mesh.tet_points(t));
      const double sign = (side == 1) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < 4; ++i) {
        jumps[static_cast<std::size_t>(slot(tet[i]))] += sign * face.normal.dot(grads[i]);
      }
    }
    for (int i = 0; i < count; ++i) {
      const int di = active.dof_of_vertex[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])];
      for (int j = 0; j < count; ++j) {
        const int dj = active.dof_of_vertex[static_cast<std::size_t>(verts[static_cast<std::size_t>(j)])];
        triplets.emplace_back(di, dj,
                              face.area * jumps[static_cast<std::size_t>(i)] * jumps[static_cast<std::size_t>(j)]);
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(active.num_dofs()), triplets);
}

RealVector assemble_load(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                         const SurfaceFunction& f, const LevelSetSurface& surface) {
  check_cells(active, cells);
  const BackgroundMesh& mesh = *active.mesh;
  RealVector load = RealVector::Zero(static_cast<Eigen::Index>(active.num_dofs()));
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const SurfaceCell& cell = cells[a];
    const auto points = mesh.tet_points(cell.tet);
    const auto dofs = active.tet_dofs(a);
    for (const auto& qp : quadrature_on_cell(cell, 4)) {
      double fe = 0.0;
      try {
        fe = f(closest_point(surface, qp.x));
      } catch (const Error& e) {
        std::ostringstream os;
        os << "at quadrature point (" << qp.x.transpose() << ") of tetrahedron " << cell.tet << ": "
           << e.what();
        throw Error(e.kind(), os.str());
      }
      const Eigen::Vector4d phi = barycentric_coordinates(points, qp.x);
      for (std::size_t i = 0; i < 4; ++i) load[dofs[i]] += qp.weight * fe * phi[static_cast<Eigen::Index>(i)];
    }
  }
  return load;
}

double active_mesh_size(const ActiveMesh& active) {
  double h = 0.0;
  for (int t : active.tets) h = std::max(h, tet_diameter(active.mesh->tet_points(t)));
  return h;
}

SystemComponents assemble_components(const ActiveMesh& active, std::span<const SurfaceCell> cells) {
  return {assemble_stiffness(active, cells), assemble_surface_mass(active, cells), assemble_jump(active),
          active_mesh_size(active)};
}

ComplexSparseSystem combine(const SystemComponents& parts, const RealVector& load,
                            const StabilizationParams& params) {
  params.validate();
  const double h2 = parts.h * parts.h;
  const double k2 = params.k2();
  const Complex rhs_weight = 1.0 - params.gamma_s * h2 * k2;
  const Complex mass_weight = (params.mass_coefficient == MassCoefficient::FromDefinition)
                                  ? k2 * rhs_weight
                                  : k2 * (1.0 - params.gamma_s * h2);

  ComplexSparseSystem system;
  system.h = parts.h;
  system.matrix = parts.stiffness.cast<Complex>() - mass_weight * parts.mass.cast<Complex>();
  if (params.gamma_j != 0.0) system.matrix += params.gamma_j * parts.jump.cast<Complex>();
  system.matrix.makeCompressed();
  system.rhs = rhs_weight * load.cast<Complex>();
  return system;
}

ComplexSparseSystem assemble_system(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                                    const StabilizationParams& params, const SurfaceFunction& f,
                                    const LevelSetSurface& surface) {
  const SystemComponents parts = assemble_components(active, cells);
  return combine(parts, assemble_load(active, cells, f, surface), params);
}

ComplexSparseSystem assemble_system(const ActiveMesh& active, std::span<const SurfaceCell> cells,
                                    const StabilizationParams& params, const AmbientScalarField& f,
                                    const LevelSetSurface& surface) {
  return assemble_system(active, cells, params, SurfaceFunction([&f](const Vec3& p) { return f(p); }),
                         surface);
}

}  // namespace surfhelm
