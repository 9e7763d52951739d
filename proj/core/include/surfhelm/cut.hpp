#pragma once

#include <array>
#include <span>
#include <vector>

#include "surfhelm/geometry.hpp"
#include "surfhelm/mesh.hpp"

namespace surfhelm {

using Triangle = std::array<Vec3, 3>;

double triangle_area(const Triangle& tri);

/// Planar piece of the discrete surface inside one tetrahedron.
struct SurfaceCell {
  /// Owner tetrahedron: background id for cut_active_mesh, else caller-defined.
  int tet = -1;
  /// One triangle for a 1-vs-3 sign split, two for a 2-vs-2 split.
  std::vector<Triangle> triangles;
  /// ∇b_h/|∇b_h| on the owner tetrahedron.
  Vec3 normal = Vec3::Zero();
  double area = 0.0;
};

/// Zero set of the linear interpolant of `values` on the tetrahedron `points`.
/// A 2-vs-2 quadrilateral is split along its shorter diagonal.
/// Throws NoCut unless the values contain both signs and no zero.
SurfaceCell intersect_tet(const std::array<Vec3, 4>& points, const std::array<double, 4>& values,
                          int owner = -1);

/// One SurfaceCell per active tetrahedron, in ActiveMesh::tets order.
std::vector<SurfaceCell> cut_active_mesh(const ActiveMesh& active, const NodalLevelSet& level_set);

double surface_area(std::span<const SurfaceCell> cells);

/// Symmetric rule on the reference triangle; weights sum to one.
struct TriangleQuadrature {
  std::vector<Vec3> barycentric;
  std::vector<double> weights;
  int degree;
};

/// Supported degrees: 1 (centroid), 2 (3 points), 4 (6 points).
/// Throws UnsupportedDegree otherwise.
const TriangleQuadrature& triangle_rule(int degree);

struct QuadraturePoint {
  Vec3 x;
  double weight;
};

std::vector<QuadraturePoint> quadrature_on_cell(const SurfaceCell& cell, int degree);

}  // namespace surfhelm
