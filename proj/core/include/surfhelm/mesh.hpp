#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "surfhelm/geometry.hpp"

namespace surfhelm {

struct Box {
  Vec3 lower;
  Vec3 upper;

  static Box cube(double half_width) {
    return {Vec3::Constant(-half_width), Vec3::Constant(half_width)};
  }
  Vec3 extent() const { return upper - lower; }
  double volume() const { return extent().prod(); }
};

using Tet = std::array<int, 4>;

/// Tetrahedral background mesh. Tetrahedra are positively oriented.
class BackgroundMesh {
 public:
  /// Builds from explicit vertices and connectivity; negatively oriented
  /// tetrahedra are flipped. Throws InvalidConfig on degenerate elements.
  BackgroundMesh(std::vector<Vec3> vertices, std::vector<Tet> tets);

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Tet>& tets() const noexcept { return tets_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_tets() const noexcept { return tets_.size(); }

  const Vec3& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  std::array<Vec3, 4> tet_points(int t) const;

  /// Max tetrahedron diameter.
  double h() const noexcept { return h_; }
  /// Min tetrahedron diameter.
  double h_min() const noexcept { return h_min_; }

  /// Cells per axis for structured meshes, 0 otherwise.
  int cells_per_axis() const noexcept { return cells_per_axis_; }

 private:
  friend BackgroundMesh build_background_mesh(const Box& box, int cells_per_axis);

  std::vector<Vec3> vertices_;
  std::vector<Tet> tets_;
  double h_ = 0.0;
  double h_min_ = 0.0;
  int cells_per_axis_ = 0;
};

/// Structured mesh of `box` with n³ hexahedral cells, each split into six
/// Kuhn tetrahedra sharing the cell's main diagonal.
/// Throws InvalidBox for non-positive extent or n < 1.
BackgroundMesh build_background_mesh(const Box& box, int cells_per_axis);

double tet_volume(const std::array<Vec3, 4>& p);
double tet_diameter(const std::array<Vec3, 4>& p);

/// Gradients of the four barycentric coordinates (constant on the element).
std::array<Vec3, 4> barycentric_gradients(const std::array<Vec3, 4>& p);

/// Piecewise-linear level set: one value per background vertex.
class NodalLevelSet {
 public:
  /// Relative size of the shift applied to near-zero nodal values.
  static constexpr double kZeroShift = 1e-10;

  /// Takes raw nodal values and replaces any |v| < kZeroShift·h by
  /// ±kZeroShift·h (zero counts as positive).
  NodalLevelSet(const BackgroundMesh& mesh, std::vector<double> values);

  const BackgroundMesh& mesh() const noexcept { return *mesh_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](int v) const { return values_[static_cast<std::size_t>(v)]; }
  std::array<double, 4> tet_values(int t) const;

 private:
  const BackgroundMesh* mesh_;
  std::vector<double> values_;
};

NodalLevelSet interpolate_level_set(const BackgroundMesh& mesh, const LevelSetSurface& surface);

/// Face shared by two active tetrahedra. The normal points from tets[0]
/// into tets[1], where tets[0] < tets[1] are positions in ActiveMesh::tets.
struct InternalFace {
  std::array<int, 3> vertices;
  std::array<int, 2> tets;
  double area;
  Vec3 normal;
};

/// Background tetrahedra cut by the discrete surface, with a dense
/// renumbering of their vertices into degrees of freedom.
struct ActiveMesh {
  const BackgroundMesh* mesh = nullptr;
  /// Background ids of active tetrahedra, increasing.
  std::vector<int> tets;
  /// Background vertex id -> dof, or -1.
  std::vector<int> dof_of_vertex;
  /// dof -> background vertex id.
  std::vector<int> vertex_of_dof;
  std::vector<InternalFace> faces;

  std::size_t num_dofs() const noexcept { return vertex_of_dof.size(); }
  std::array<int, 4> tet_dofs(std::size_t active_index) const;
};

/// Throws EmptyActiveSet when no tetrahedron changes sign.
ActiveMesh extract_active_mesh(const NodalLevelSet& level_set);

}  // namespace surfhelm
