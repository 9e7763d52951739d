#include "surfhelm/cut.hpp"

#include <numeric>
#include <string>

#include "surfhelm/errors.hpp"

namespace surfhelm {

double triangle_area(const Triangle& tri) {
  return 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
}

namespace {

Vec3 crossing(const std::array<Vec3, 4>& p, const std::array<double, 4>& v, int i, int j) {
  const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
  const double t = v[si] / (v[si] - v[sj]);
  return p[si] + t * (p[sj] - p[si]);
}

}  // namespace

SurfaceCell intersect_tet(const std::array<Vec3, 4>& points, const std::array<double, 4>& values,
                          int owner) {
  std::array<int, 4> neg{}, pos{};
  int nneg = 0, npos = 0;
  for (int i = 0; i < 4; ++i) {
    const double v = values[static_cast<std::size_t>(i)];
    if (v < 0.0) {
      neg[static_cast<std::size_t>(nneg++)] = i;
    } else if (v > 0.0) {
      pos[static_cast<std::size_t>(npos++)] = i;
    } else {
      throw Error(ErrorKind::NoCut, "nodal value is exactly zero");
    }
  }
  if (nneg == 0 || npos == 0) {
    throw Error(ErrorKind::NoCut, "nodal values share one sign");
  }

  SurfaceCell cell;
  cell.tet = owner;
  const auto grads = barycentric_gradients(points);
  Vec3 grad = Vec3::Zero();
  for (std::size_t i = 0; i < 4; ++i) grad += values[i] * grads[i];
  cell.normal = grad.normalized();

  if (nneg == 1 || npos == 1) {
    const int lone = (nneg == 1) ? neg[0] : pos[0];
    const auto& others = (nneg == 1) ? pos : neg;
    cell.triangles.push_back({crossing(points, values, lone, others[0]),
                              crossing(points, values, lone, others[1]),
                              crossing(points, values, lone, others[2])});
  } else {
    // Cycle a-c, a-d, b-d, b-c with a,b negative and c,d positive.
    const Vec3 q0 = crossing(points, values, neg[0], pos[0]);
    const Vec3 q1 = crossing(points, values, neg[0], pos[1]);
    const Vec3 q2 = crossing(points, values, neg[1], pos[1]);
    const Vec3 q3 = crossing(points, values, neg[1], pos[0]);
    if ((q2 - q0).squaredNorm() <= (q3 - q1).squaredNorm()) {
      cell.triangles.push_back({q0, q1, q2});
      cell.triangles.push_back({q0, q2, q3});
    } else {
      cell.triangles.push_back({q1, q2, q3});
      cell.triangles.push_back({q1, q3, q0});
    }
  }
  for (auto& tri : cell.triangles) {
    // Orient each triangle so its right-hand normal agrees with n_h.
    if ((tri[1] - tri[0]).cross(tri[2] - tri[0]).dot(cell.normal) < 0.0) std::swap(tri[1], tri[2]);
    cell.area += triangle_area(tri);
  }
  return cell;
}

std::vector<SurfaceCell> cut_active_mesh(const ActiveMesh& active, const NodalLevelSet& level_set) {
  const BackgroundMesh& mesh = level_set.mesh();
  std::vector<SurfaceCell> cells;
  cells.reserve(active.tets.size());
  for (int t : active.tets) {
    cells.push_back(intersect_tet(mesh.tet_points(t), level_set.tet_values(t), t));
  }
  return cells;
}

double surface_area(std::span<const SurfaceCell> cells) {
  return std::accumulate(cells.begin(), cells.end(), 0.0,
                         [](double acc, const SurfaceCell& c) { return acc + c.area; });
}

const TriangleQuadrature& triangle_rule(int degree) {
  static const TriangleQuadrature centroid{{Vec3::Constant(1.0 / 3.0)}, {1.0}, 1};
  static const TriangleQuadrature three_point{
      {Vec3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0), Vec3(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0),
       Vec3(1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0)},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
      2};
  // Strang–Fix / Dunavant degree-4 rule.
  static const TriangleQuadrature six_point = [] {
    constexpr double a = 0.445948490915965;
    constexpr double b = 0.091576213509771;
    constexpr double wa = 0.223381589678011;
    constexpr double wb = 0.109951743655322;
    TriangleQuadrature q;
    q.degree = 4;
    q.barycentric = {Vec3(1.0 - 2.0 * a, a, a), Vec3(a, 1.0 - 2.0 * a, a), Vec3(a, a, 1.0 - 2.0 * a),
                     Vec3(1.0 - 2.0 * b, b, b), Vec3(b, 1.0 - 2.0 * b, b), Vec3(b, b, 1.0 - 2.0 * b)};
    q.weights = {wa, wa, wa, wb, wb, wb};
    return q;
  }();

  switch (degree) {
    case 1: return centroid;
    case 2: return three_point;
    case 4: return six_point;
    default:
      throw Error(ErrorKind::UnsupportedDegree,
                  "triangle quadrature degree " + std::to_string(degree) + " (supported: 1, 2, 4)");
  }
}

std::vector<QuadraturePoint> quadrature_on_cell(const SurfaceCell& cell, int degree) {
  const TriangleQuadrature& rule = triangle_rule(degree);
  std::vector<QuadraturePoint> out;
  out.reserve(rule.weights.size() * cell.triangles.size());
  for (const Triangle& tri : cell.triangles) {
    const double area = triangle_area(tri);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vec3& lam = rule.barycentric[q];
      out.push_back({lam[0] * tri[0] + lam[1] * tri[1] + lam[2] * tri[2], rule.weights[q] * area});
    }
  }
  return out;
}

}  // namespace surfhelm
