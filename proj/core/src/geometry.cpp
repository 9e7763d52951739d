#include "surfhelm/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <sstream>

#include <json.hpp>

#include "surfhelm/errors.hpp"

namespace surfhelm {

namespace {

constexpr double kMinGradientNorm = 1e-12;
constexpr int kMaxProjectionSteps = 100;

// Minimum principal radius of curvature of the polynomial isoline, sampled
// at 4000 ray intersections: ≈ 0.1428.
constexpr double kPolyMinCurvatureRadius = 0.1428;
// Longest chord of the polynomial isoline (extent ≈ [−2,2]×[−2,2]×[−2.12,2.12]).
constexpr double kPolyDiameter = 7.0;

struct PolyTerms {
  double a, b, c, d, e, f;
};

PolyTerms poly_terms(const Vec3& p) {
  const double x2 = p.x() * p.x(), y2 = p.y() * p.y(), z2 = p.z() * p.z();
  return {x2 + y2 - 4.0, z2 - 2.0, y2 + z2 - 4.0, x2 - 1.0, z2 + x2 - 4.0, y2 - 1.0};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec3 read_vec3(const nlohmann::json& j, const char* key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 3) {
    throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' must be an array of 3 numbers");
  }
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

LevelSetSurface LevelSetSurface::sphere(const Vec3& center, double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "sphere radius must be positive");
  }
  return LevelSetSurface(Sphere{center, radius}, 0.4 * radius, 2.0 * radius);
}

LevelSetSurface LevelSetSurface::spheroid(const Vec3& semi_axes, const Vec3& center) {
  if (!(semi_axes.minCoeff() > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "spheroid semi-axes must be positive");
  }
  const double amin = semi_axes.minCoeff();
  const double amax = semi_axes.maxCoeff();
  return LevelSetSurface(Spheroid{center, semi_axes}, 0.4 * amin * amin / amax, 2.0 * amax);
}

LevelSetSurface LevelSetSurface::poly_isoline() {
  return LevelSetSurface(PolyIsoline{}, 0.4 * kPolyMinCurvatureRadius, kPolyDiameter);
}

void LevelSetSurface::set_tube_half_width(double delta) {
  if (!(delta > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "tube half-width must be positive");
  }
  tube_half_width_ = delta;
}

std::string_view LevelSetSurface::kind_name() const noexcept {
  return std::visit(overloaded{[](const Sphere&) { return std::string_view("sphere"); },
                               [](const Spheroid&) { return std::string_view("spheroid"); },
                               [](const PolyIsoline&) { return std::string_view("poly_isoline"); }},
                    shape_);
}

double LevelSetSurface::value(const Vec3& x) const {
  return std::visit(
      overloaded{
          [&](const Sphere& s) { return (x - s.center).norm() - s.radius; },
          [&](const Spheroid& s) {
            return (x - s.center).cwiseQuotient(s.semi_axes).squaredNorm() - 1.0;
          },
          [&](const PolyIsoline&) {
            const auto t = poly_terms(x);
            return t.a * t.a + t.b * t.b + t.c * t.c + t.d * t.d + t.e * t.e + t.f * t.f - 15.0;
          }},
      shape_);
}

Vec3 LevelSetSurface::gradient(const Vec3& x) const {
  return std::visit(
      overloaded{
          [&](const Sphere& s) -> Vec3 {
            const Vec3 r = x - s.center;
            const double len = r.norm();
            if (len == 0.0) return Vec3::Zero();
            return r / len;
          },
          [&](const Spheroid& s) -> Vec3 {
            return 2.0 * (x - s.center).cwiseQuotient(s.semi_axes.cwiseProduct(s.semi_axes));
          },
          [&](const PolyIsoline&) -> Vec3 {
            const auto t = poly_terms(x);
            return {4.0 * x.x() * (t.a + t.d + t.e), 4.0 * x.y() * (t.a + t.c + t.f),
                    4.0 * x.z() * (t.b + t.c + t.e)};
          }},
      shape_);
}

Mat3 LevelSetSurface::hessian(const Vec3& x) const {
  return std::visit(
      overloaded{
          [&](const Sphere& s) -> Mat3 {
            const Vec3 r = x - s.center;
            const double len = r.norm();
            if (len == 0.0) return Mat3::Zero();
            const Vec3 n = r / len;
            return (Mat3::Identity() - n * n.transpose()) / len;
          },
          [&](const Spheroid& s) -> Mat3 {
            return Vec3(2.0 * s.semi_axes.cwiseProduct(s.semi_axes).cwiseInverse()).asDiagonal();
          },
          [&](const PolyIsoline&) -> Mat3 {
            const auto t = poly_terms(x);
            const double px = x.x(), py = x.y(), pz = x.z();
            Mat3 h;
            h(0, 0) = 4.0 * (t.a + t.d + t.e) + 24.0 * px * px;
            h(1, 1) = 4.0 * (t.a + t.c + t.f) + 24.0 * py * py;
            h(2, 2) = 4.0 * (t.b + t.c + t.e) + 24.0 * pz * pz;
            h(0, 1) = h(1, 0) = 8.0 * px * py;
            h(0, 2) = h(2, 0) = 8.0 * px * pz;
            h(1, 2) = h(2, 1) = 8.0 * py * pz;
            return h;
          }},
      shape_);
}

double LevelSetSurface::distance_estimate(const Vec3& x) const {
  if (std::holds_alternative<Sphere>(shape_)) return std::abs(value(x));
  const double g = gradient(x).norm();
  if (g <= kMinGradientNorm) return std::numeric_limits<double>::infinity();
  return std::abs(value(x)) / g;
}

LevelSetSurface parse_surface(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("surface descriptor: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    LevelSetSurface surface = [&] {
      if (kind == "sphere") {
        const Vec3 c = j.contains("center") ? read_vec3(j, "center") : Vec3::Zero();
        return LevelSetSurface::sphere(c, j.at("radius").get<double>());
      }
      if (kind == "spheroid") {
        const Vec3 c = j.contains("center") ? read_vec3(j, "center") : Vec3::Zero();
        return LevelSetSurface::spheroid(read_vec3(j, "semi_axes"), c);
      }
      if (kind == "poly_isoline") return LevelSetSurface::poly_isoline();
      throw Error(ErrorKind::InvalidConfig, "unknown surface kind '" + kind + "'");
    }();
    if (j.contains("tube_half_width")) {
      surface.set_tube_half_width(j.at("tube_half_width").get<double>());
    }
    return surface;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("surface descriptor: ") + e.what());
  }
}

Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& x) {
  const Vec3 g = surface.gradient(x);
  const double len = g.norm();
  if (len <= kMinGradientNorm) {
    std::ostringstream os;
    os << "|grad| = " << len << " at (" << x.transpose() << ")";
    throw Error(ErrorKind::DegenerateGradient, os.str());
  }
  return g / len;
}

double mean_curvature_divergence(const LevelSetSurface& surface, const Vec3& x) {
  const Vec3 n = unit_normal(surface, x);
  const Mat3 h = surface.hessian(x);
  return (h.trace() - n.dot(h * n)) / surface.gradient(x).norm();
}

namespace {

// Newton polish of p − x + μ∇φ(p) = 0, φ(p) = 0 starting from an on-surface
// point. Returns the number of iterations used or −1 on failure.
int polish_closest_point(const LevelSetSurface& surface, const Vec3& x, Vec3& p, int budget) {
  const double tol = 1e-12 * surface.diameter();
  Vec3 g = surface.gradient(p);
  double mu = -(p - x).dot(g) / g.squaredNorm();
  for (int it = 0; it < budget; ++it) {
    g = surface.gradient(p);
    const Mat3 h = surface.hessian(p);
    Eigen::Vector4d rhs;
    rhs.head<3>() = -(p - x + mu * g);
    rhs(3) = -surface.value(p);
    Eigen::Matrix4d jac;
    jac.topLeftCorner<3, 3>() = Mat3::Identity() + mu * h;
    jac.topRightCorner<3, 1>() = g;
    jac.bottomLeftCorner<1, 3>() = g.transpose();
    jac(3, 3) = 0.0;
    const Eigen::Vector4d step = jac.fullPivLu().solve(rhs);
    if (!step.allFinite()) return -1;
    p += step.head<3>();
    mu += step(3);
    if (step.head<3>().norm() <= tol) return it + 1;
  }
  return -1;
}

}  // namespace

Vec3 closest_point(const LevelSetSurface& surface, const Vec3& x) {
  if (surface.distance_estimate(x) >= surface.tube_half_width()) {
    std::ostringstream os;
    os << "query (" << x.transpose() << ") farther than " << surface.tube_half_width();
    throw Error(ErrorKind::OutsideTubularNeighborhood, os.str());
  }

  if (const auto* s = std::get_if<Sphere>(&surface.shape())) {
    const Vec3 r = x - s->center;
    return s->center + s->radius * r / r.norm();
  }

  const double tol = 1e-12 * surface.diameter();
  Vec3 p = x;
  int used = 0;
  // Damped gradient projection onto the zero set.
  double dist = surface.distance_estimate(p);
  while (dist > tol && used < kMaxProjectionSteps) {
    const Vec3 g = surface.gradient(p);
    const Vec3 step = -surface.value(p) * g / g.squaredNorm();
    double damping = 1.0;
    Vec3 trial = p + step;
    while (surface.distance_estimate(trial) >= dist && damping > 1e-4) {
      damping *= 0.5;
      trial = p + damping * step;
    }
    p = trial;
    dist = surface.distance_estimate(p);
    ++used;
  }
  const int polish = polish_closest_point(surface, x, p, kMaxProjectionSteps - used);
  if (polish < 0 || !p.allFinite() || surface.distance_estimate(p) > tol) {
    std::ostringstream os;
    os << "no convergence from (" << x.transpose() << ")";
    throw Error(ErrorKind::ProjectionDiverged, os.str());
  }
  return p;
}

ClosestPointMap closest_point_with_jacobian(const LevelSetSurface& surface, const Vec3& x) {
  const Vec3 p = closest_point(surface, x);
  const Vec3 g = surface.gradient(p);
  const double mu = -(p - x).dot(g) / g.squaredNorm();
  Eigen::Matrix4d jac;
  jac.topLeftCorner<3, 3>() = Mat3::Identity() + mu * surface.hessian(p);
  jac.topRightCorner<3, 1>() = g;
  jac.bottomLeftCorner<1, 3>() = g.transpose();
  jac(3, 3) = 0.0;
  Eigen::Matrix<double, 4, 3> rhs = Eigen::Matrix<double, 4, 3>::Zero();
  rhs.topRows<3>() = Mat3::Identity();
  const Eigen::Matrix<double, 4, 3> sol = jac.partialPivLu().solve(rhs);
  return {p, sol.topRows<3>()};
}

Mat3 closest_point_jacobian(const LevelSetSurface& surface, const Vec3& x) {
  return closest_point_with_jacobian(surface, x).jacobian;
}

}  // namespace surfhelm
