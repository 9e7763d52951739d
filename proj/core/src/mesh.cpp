#include "surfhelm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <sstream>

#include "surfhelm/errors.hpp"

namespace surfhelm {

double tet_volume(const std::array<Vec3, 4>& p) {
  return (p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0])) / 6.0;
}

double tet_diameter(const std::array<Vec3, 4>& p) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) d = std::max(d, (p[i] - p[j]).norm());
  }
  return d;
}

std::array<Vec3, 4> barycentric_gradients(const std::array<Vec3, 4>& p) {
  Mat3 jac;
  jac.col(0) = p[1] - p[0];
  jac.col(1) = p[2] - p[0];
  jac.col(2) = p[3] - p[0];
  // Rows of J⁻¹ are the gradients of λ1..λ3.
  const Mat3 inv = jac.inverse();
  std::array<Vec3, 4> g;
  g[1] = inv.row(0).transpose();
  g[2] = inv.row(1).transpose();
  g[3] = inv.row(2).transpose();
  g[0] = -(g[1] + g[2] + g[3]);
  return g;
}

BackgroundMesh::BackgroundMesh(std::vector<Vec3> vertices, std::vector<Tet> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  h_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    for (int v : tets_[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) {
        throw Error(ErrorKind::InvalidConfig, "tetrahedron references a missing vertex");
      }
    }
    auto pts = tet_points(static_cast<int>(t));
    const double vol = tet_volume(pts);
    const double diam = tet_diameter(pts);
    if (!(std::abs(vol) > 1e-14 * diam * diam * diam)) {
      throw Error(ErrorKind::InvalidConfig, "degenerate tetrahedron " + std::to_string(t));
    }
    if (vol < 0.0) std::swap(tets_[t][2], tets_[t][3]);
    h_ = std::max(h_, diam);
    h_min_ = std::min(h_min_, diam);
  }
  if (tets_.empty()) h_min_ = 0.0;
}

std::array<Vec3, 4> BackgroundMesh::tet_points(int t) const {
  const Tet& tet = tets_[static_cast<std::size_t>(t)];
  return {vertex(tet[0]), vertex(tet[1]), vertex(tet[2]), vertex(tet[3])};
}

BackgroundMesh build_background_mesh(const Box& box, int n) {
  const Vec3 ext = box.extent();
  if (!(ext.minCoeff() > 0.0) || !ext.allFinite()) {
    throw Error(ErrorKind::InvalidBox, "box must have positive extent on every axis");
  }
  if (n < 1) {
    throw Error(ErrorKind::InvalidBox, "cells per axis must be positive");
  }
  const int nv = n + 1;
  const Vec3 step = ext / n;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv) * nv * nv);
  for (int k = 0; k < nv; ++k) {
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nv; ++i) {
        vertices.emplace_back(box.lower + Vec3(i * step.x(), j * step.y(), k * step.z()));
      }
    }
  }
  // Same corner walks in every cube, so neighbouring cubes share face diagonals.
  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  auto index = [nv](int i, int j, int k) { return i + nv * (j + nv * k); };

  std::vector<Tet> tets;
  tets.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& perm : perms) {
          std::array<int, 3> c{i, j, k};
          Tet tet;
          tet[0] = index(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
            tet[static_cast<std::size_t>(s) + 1] = index(c[0], c[1], c[2]);
          }
          tets.push_back(tet);
        }
      }
    }
  }

  BackgroundMesh mesh(std::move(vertices), std::move(tets));
  mesh.cells_per_axis_ = n;
  return mesh;
}

NodalLevelSet::NodalLevelSet(const BackgroundMesh& mesh, std::vector<double> values)
    : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.num_vertices()) {
    throw Error(ErrorKind::InvalidConfig, "level set needs one value per vertex");
  }
  const double shift = kZeroShift * mesh.h();
  for (double& v : values_) {
    if (std::abs(v) < shift) v = (v < 0.0) ? -shift : shift;
  }
}

std::array<double, 4> NodalLevelSet::tet_values(int t) const {
  const Tet& tet = mesh_->tets()[static_cast<std::size_t>(t)];
  return {(*this)[tet[0]], (*this)[tet[1]], (*this)[tet[2]], (*this)[tet[3]]};
}

NodalLevelSet interpolate_level_set(const BackgroundMesh& mesh, const LevelSetSurface& surface) {
  std::vector<double> values(mesh.num_vertices());
  std::transform(mesh.vertices().begin(), mesh.vertices().end(), values.begin(),
                 [&](const Vec3& x) { return surface.value(x); });
  return NodalLevelSet(mesh, std::move(values));
}

std::array<int, 4> ActiveMesh::tet_dofs(std::size_t active_index) const {
  const Tet& tet = mesh->tets()[static_cast<std::size_t>(tets[active_index])];
  return {dof_of_vertex[static_cast<std::size_t>(tet[0])],
          dof_of_vertex[static_cast<std::size_t>(tet[1])],
          dof_of_vertex[static_cast<std::size_t>(tet[2])],
          dof_of_vertex[static_cast<std::size_t>(tet[3])]};
}

ActiveMesh extract_active_mesh(const NodalLevelSet& level_set) {
  const BackgroundMesh& mesh = level_set.mesh();
  ActiveMesh active;
  active.mesh = &mesh;
  active.dof_of_vertex.assign(mesh.num_vertices(), -1);

  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto vals = level_set.tet_values(static_cast<int>(t));
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    if (*lo < 0.0 && *hi > 0.0) active.tets.push_back(static_cast<int>(t));
  }
  if (active.tets.empty()) {
    throw Error(ErrorKind::EmptyActiveSet,
                "no background tetrahedron is cut by the surface (outside box or mesh too coarse)");
  }

  // Dofs are numbered by first appearance in tetrahedron order.
  for (int t : active.tets) {
    for (int v : mesh.tets()[static_cast<std::size_t>(t)]) {
      auto& dof = active.dof_of_vertex[static_cast<std::size_t>(v)];
      if (dof < 0) {
        dof = static_cast<int>(active.vertex_of_dof.size());
        active.vertex_of_dof.push_back(v);
      }
    }
  }

  struct FaceRecord {
    std::array<int, 3> key;
    int active_tet;
    int opposite;
  };
  std::vector<FaceRecord> records;
  records.reserve(4 * active.tets.size());
  for (std::size_t a = 0; a < active.tets.size(); ++a) {
    const Tet& tet = mesh.tets()[static_cast<std::size_t>(active.tets[a])];
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> key{};
      int m = 0;
      for (int i = 0; i < 4; ++i) {
        if (i != skip) key[static_cast<std::size_t>(m++)] = tet[static_cast<std::size_t>(i)];
      }
      std::sort(key.begin(), key.end());
      records.push_back({key, static_cast<int>(a), tet[static_cast<std::size_t>(skip)]});
    }
  }
  std::sort(records.begin(), records.end(), [](const FaceRecord& l, const FaceRecord& r) {
    return l.key != r.key ? l.key < r.key : l.active_tet < r.active_tet;
  });

  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    if (records[i].key != records[i + 1].key) continue;
    const FaceRecord& lower = records[i];
    const FaceRecord& upper = records[i + 1];
    const Vec3& a = mesh.vertex(lower.key[0]);
    const Vec3& b = mesh.vertex(lower.key[1]);
    const Vec3& c = mesh.vertex(lower.key[2]);
    Vec3 normal = (b - a).cross(c - a);
    const double twice_area = normal.norm();
    normal /= twice_area;
    if (normal.dot(a - mesh.vertex(lower.opposite)) < 0.0) normal = -normal;
    active.faces.push_back({lower.key, {lower.active_tet, upper.active_tet}, 0.5 * twice_area, normal});
    ++i;
  }
  std::sort(active.faces.begin(), active.faces.end(), [](const InternalFace& l, const InternalFace& r) {
    return l.tets != r.tets ? l.tets < r.tets : l.vertices < r.vertices;
  });
  return active;
}

}  // namespace surfhelm
