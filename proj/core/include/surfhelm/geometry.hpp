#pragma once

#include <string_view>
#include <variant>

#include <Eigen/Dense>

namespace surfhelm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Axis-aligned ellipsoid (x-c)_i^2 / a_i^2 summed, minus one.
struct Spheroid {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3::Ones();
};

/// Zero set of the sixth-degree polynomial
///   (x²+y²−4)² + (z²−2)² + (y²+z²−4)² + (x²−1)² + (z²+x²−4)² + (y²−1)² − 15,
/// a rounded-cube surface with six handles that fits in [−2.6, 2.6]³.
struct PolyIsoline {};

/// Analytic implicit surface.
///
/// For spheres the value is the exact signed distance. Spheroids and the
/// polynomial isoline expose the raw implicit function; only its zero set and
/// its normal field are consumed downstream.
class LevelSetSurface {
 public:
  using Shape = std::variant<Sphere, Spheroid, PolyIsoline>;

  static LevelSetSurface sphere(const Vec3& center, double radius);
  static LevelSetSurface spheroid(const Vec3& semi_axes, const Vec3& center = Vec3::Zero());
  static LevelSetSurface poly_isoline();

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;

  /// Signed-distance estimate |value| / |gradient| (exact for spheres).
  double distance_estimate(const Vec3& x) const;

  /// Half-width of the tubular neighborhood in which closest-point
  /// projection is guaranteed to be well defined.
  double tube_half_width() const noexcept { return tube_half_width_; }
  void set_tube_half_width(double delta);

  /// Characteristic size used to scale absolute tolerances.
  double diameter() const noexcept { return diameter_; }

  const Shape& shape() const noexcept { return shape_; }
  std::string_view kind_name() const noexcept;

 private:
  LevelSetSurface(Shape shape, double tube_half_width, double diameter)
      : shape_(shape), tube_half_width_(tube_half_width), diameter_(diameter) {}

  Shape shape_;
  double tube_half_width_;
  double diameter_;
};

/// Parses a surface descriptor such as
/// {"kind":"sphere","center":[0,0,0],"radius":0.5},
/// {"kind":"spheroid","semi_axes":[0.5,0.5,0.25]} or {"kind":"poly_isoline"}.
/// An optional "tube_half_width" overrides the default.
/// Throws Error(InvalidConfig) on malformed input.
LevelSetSurface parse_surface(std::string_view json_text);

/// Exterior unit normal ∇φ/|∇φ|. Throws DegenerateGradient if |∇φ| ≤ 1e-12.
Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& x);

/// ∇·(∇φ/|∇φ|), i.e. the trace of the shape operator (2/r on a sphere).
double mean_curvature_divergence(const LevelSetSurface& surface, const Vec3& x);

/// Closest point on the zero set. Throws OutsideTubularNeighborhood when the
/// query is farther than tube_half_width(), ProjectionDiverged when the
/// iteration fails within 100 steps.
Vec3 closest_point(const LevelSetSurface& surface, const Vec3& x);

/// Jacobian Dp of the closest-point map at x, obtained by implicit
/// differentiation of the stationarity system p − x + μ∇φ(p) = 0, φ(p) = 0.
Mat3 closest_point_jacobian(const LevelSetSurface& surface, const Vec3& x);

struct ClosestPointMap {
  Vec3 point;
  Mat3 jacobian;
};

/// closest_point and closest_point_jacobian from a single projection.
ClosestPointMap closest_point_with_jacobian(const LevelSetSurface& surface, const Vec3& x);

/// Extension by closest-point composition: field ∘ p.
template <typename Field>
auto extend(const Field& field, const LevelSetSurface& surface, const Vec3& x) {
  return field(closest_point(surface, x));
}

}  // namespace surfhelm
