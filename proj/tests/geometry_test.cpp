#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "surfhelm/errors.hpp"
#include "surfhelm/fields.hpp"
#include "surfhelm/geometry.hpp"

namespace surfhelm {
namespace {

Vec3 random_direction(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vec3 d(g(rng), g(rng), g(rng));
  return d.normalized();
}

Vec3 on_spheroid(const Vec3& axes, std::mt19937& rng) {
  const Vec3 d = random_direction(rng);
  return d.cwiseProduct(axes) / d.cwiseProduct(axes).cwiseQuotient(axes).norm();
}

double poly_by_terms(const Vec3& p) {
  const double x2 = p.x() * p.x(), y2 = p.y() * p.y(), z2 = p.z() * p.z();
  const double terms[] = {x2 + y2 - 4.0, z2 - 2.0, y2 + z2 - 4.0, x2 - 1.0, z2 + x2 - 4.0, y2 - 1.0};
  double s = -15.0;
  for (double t : terms) s += t * t;
  return s;
}

TEST(LevelSetValue, SphereOnSurfaceIsZero) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  EXPECT_NEAR(s.value(Vec3(0.5, 0, 0)), 0.0, 1e-15);
}

TEST(LevelSetValue, SphereIsSignedDistance) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  EXPECT_NEAR(s.value(Vec3(1, 0, 0)), 0.5, 1e-15);
  EXPECT_NEAR(s.value(Vec3::Zero()), -0.5, 1e-15);
}

TEST(LevelSetValue, PolyIsolineAtOrigin) {
  const auto s = LevelSetSurface::poly_isoline();
  EXPECT_DOUBLE_EQ(poly_by_terms(Vec3::Zero()), 39.0);
  EXPECT_DOUBLE_EQ(s.value(Vec3::Zero()), 39.0);
}

TEST(LevelSetValue, PolyIsolineMatchesTermwiseEvaluation) {
  const auto s = LevelSetSurface::poly_isoline();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.6, 2.6);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    EXPECT_NEAR(s.value(x), poly_by_terms(x), 1e-11 * (1.0 + std::abs(poly_by_terms(x))));
  }
}

TEST(LevelSetDerivatives, GradientAndHessianMatchFiniteDifferences) {
  const LevelSetSurface surfaces[] = {LevelSetSurface::sphere(Vec3(0.1, -0.2, 0.05), 0.5),
                                      LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25)),
                                      LevelSetSurface::poly_isoline()};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double step = 1e-5;
  for (const auto& s : surfaces) {
    for (int i = 0; i < 200; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng));
      if ((x - Vec3(0.1, -0.2, 0.05)).norm() < 0.05) continue;
      const Vec3 g = s.gradient(x);
      const Mat3 h = s.hessian(x);
      for (int d = 0; d < 3; ++d) {
        const Vec3 e = Vec3::Unit(d) * step;
        const double fd = (s.value(x + e) - s.value(x - e)) / (2 * step);
        EXPECT_NEAR(g(d), fd, 1e-6 * (1.0 + std::abs(fd))) << s.kind_name();
        const Vec3 fdh = (s.gradient(x + e) - s.gradient(x - e)) / (2 * step);
        for (int r = 0; r < 3; ++r) EXPECT_NEAR(h(r, d), fdh(r), 1e-5 * (1.0 + std::abs(fdh(r)))) << s.kind_name();
      }
    }
  }
}

TEST(UnitNormal, SphereAxisPoints) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  EXPECT_TRUE(unit_normal(s, Vec3(0.5, 0, 0)).isApprox(Vec3(1, 0, 0), 1e-15));
  EXPECT_TRUE(unit_normal(s, Vec3(0, 0, -2)).isApprox(Vec3(0, 0, -1), 1e-15));
}

TEST(UnitNormal, SpheroidPole) {
  const auto s = LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25));
  EXPECT_TRUE(unit_normal(s, Vec3(0, 0, 0.25)).isApprox(Vec3(0, 0, 1), 1e-15));
}

TEST(UnitNormal, UnitLengthAtRandomPoints) {
  const LevelSetSurface surfaces[] = {LevelSetSurface::sphere(Vec3::Zero(), 0.5),
                                      LevelSetSurface::spheroid(Vec3(0.5, 0.4, 0.25)),
                                      LevelSetSurface::poly_isoline()};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& s : surfaces) {
    for (int i = 0; i < 10000; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng));
      if (s.gradient(x).norm() <= 1e-6) continue;
      EXPECT_NEAR(unit_normal(s, x).norm(), 1.0, 1e-12);
    }
  }
}

TEST(UnitNormal, DegenerateGradientThrows) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  try {
    (void)unit_normal(s, Vec3::Zero());
    FAIL() << "expected DegenerateGradient";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateGradient);
  }
}

TEST(MeanCurvature, SpheresGiveTwoOverRadius) {
  std::mt19937 rng(5);
  const auto unit = LevelSetSurface::sphere(Vec3::Zero(), 1.0);
  const auto half = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 d = random_direction(rng);
    EXPECT_NEAR(mean_curvature_divergence(unit, d), 2.0, 1e-12);
    EXPECT_NEAR(mean_curvature_divergence(half, 0.5 * d), 4.0, 1e-12);
  }
}

TEST(MeanCurvature, SpheroidPoleMatchesFiniteDifferenceOfNormal) {
  const auto s = LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25));
  const Vec3 pole(0, 0, 0.25);
  const double step = 1e-5;
  double fd = 0.0;
  for (int d = 0; d < 3; ++d) {
    const Vec3 e = Vec3::Unit(d) * step;
    fd += (unit_normal(s, pole + e)(d) - unit_normal(s, pole - e)(d)) / (2 * step);
  }
  const double value = mean_curvature_divergence(s, pole);
  EXPECT_NEAR(value, fd, 1e-5 * std::abs(fd));
  // Principal radii at the pole are a²/c = 1, so the sum of curvatures is 2.
  EXPECT_NEAR(value, 2.0, 1e-12);
}

TEST(ClosestPoint, SphereExamples) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  auto wide = s;
  wide.set_tube_half_width(1.0);
  EXPECT_TRUE(closest_point(wide, Vec3(1, 0, 0)).isApprox(Vec3(0.5, 0, 0), 1e-15));
  const Vec3 on(0.4, 0.3, 0.0);
  EXPECT_TRUE(closest_point(s, on).isApprox(on, 1e-15));
}

TEST(ClosestPoint, SpheroidAxisQueryHitsPole) {
  const auto s = LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25));
  const Vec3 x(0, 0, 0.3);
  const Vec3 p = closest_point(s, x);
  EXPECT_TRUE(p.isApprox(Vec3(0, 0, 0.25), 1e-10));
  // Dense sampling of the spheroid surface.
  double best = std::numeric_limits<double>::infinity();
  Vec3 arg = Vec3::Zero();
  const int nt = 400, np = 80;
  for (int i = 0; i <= nt; ++i) {
    const double t = std::numbers::pi * i / nt;
    for (int j = 0; j < np; ++j) {
      const double ph = 2 * std::numbers::pi * j / np;
      const Vec3 q(0.5 * std::sin(t) * std::cos(ph), 0.5 * std::sin(t) * std::sin(ph), 0.25 * std::cos(t));
      if ((q - x).norm() < best) {
        best = (q - x).norm();
        arg = q;
      }
    }
  }
  EXPECT_NEAR((p - x).norm(), best, 1e-12);
  EXPECT_LT((p - arg).norm(), 1e-2);
}

TEST(ClosestPoint, ProjectionIsOnSurfaceAndIdempotent) {
  const LevelSetSurface surfaces[] = {LevelSetSurface::sphere(Vec3(0.1, 0, 0), 0.5),
                                      LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25)),
                                      LevelSetSurface::poly_isoline()};
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-2.6, 2.6);
  for (const auto& s : surfaces) {
    int accepted = 0;
    while (accepted < 300) {
      const Vec3 x(u(rng), u(rng), u(rng));
      if (s.distance_estimate(x) > 0.5 * s.tube_half_width()) continue;
      ++accepted;
      const Vec3 p = closest_point(s, x);
      EXPECT_LT(s.distance_estimate(p), 1e-10 * s.diameter()) << s.kind_name();
      EXPECT_LT((closest_point(s, p) - p).norm(), 1e-10 * s.diameter()) << s.kind_name();
      // x − p is normal to the surface at p.
      const Vec3 n = unit_normal(s, p);
      const Vec3 r = x - p;
      EXPECT_LT((r - r.dot(n) * n).norm(), 1e-9 * s.diameter()) << s.kind_name();
    }
  }
}

TEST(ClosestPoint, JacobianMatchesFiniteDifferences) {
  const LevelSetSurface surfaces[] = {LevelSetSurface::sphere(Vec3::Zero(), 0.5),
                                      LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25))};
  std::mt19937 rng(17);
  const double step = 1e-6;
  for (const auto& s : surfaces) {
    for (int i = 0; i < 50; ++i) {
      const Vec3 d = random_direction(rng);
      const Vec3 p = closest_point(s, s.kind_name() == "sphere" ? 0.5 * d : on_spheroid(Vec3(0.5, 0.5, 0.25), rng));
      const Vec3 x = p + 0.02 * unit_normal(s, p);
      const Mat3 jac = closest_point_jacobian(s, x);
      for (int c = 0; c < 3; ++c) {
        const Vec3 e = Vec3::Unit(c) * step;
        const Vec3 fd = (closest_point(s, x + e) - closest_point(s, x - e)) / (2 * step);
        EXPECT_LT((jac.col(c) - fd).norm(), 1e-6) << s.kind_name();
      }
    }
  }
}

TEST(ClosestPoint, OutsideTubeThrows) {
  const auto s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  try {
    (void)closest_point(s, Vec3(3, 0, 0));
    FAIL() << "expected OutsideTubularNeighborhood";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideTubularNeighborhood);
    EXPECT_EQ(category(e.kind()), ErrorCategory::Geometry);
  }
}

TEST(Extend, Examples) {
  auto unit = LevelSetSurface::sphere(Vec3::Zero(), 1.0);
  unit.set_tube_half_width(1.5);
  const auto x1 = AmbientScalarField::linear(Vec3(1, 0, 0));
  EXPECT_NEAR(extend(x1, unit, Vec3(2, 0, 0)), 1.0, 1e-15);

  auto half = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  half.set_tube_half_width(1.0);
  const auto cubic = AmbientScalarField::preset("cubic");
  EXPECT_NEAR(extend(cubic, half, Vec3(1, 0, 0)), 0.0, 1e-15);
}

TEST(Extend, IdentityOnSurface) {
  const auto s = LevelSetSurface::spheroid(Vec3(0.5, 0.4, 0.25));
  const auto cubic = AmbientScalarField::preset("cubic");
  std::mt19937 rng(19);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = closest_point(s, on_spheroid(Vec3(0.5, 0.4, 0.25), rng) * 1.01);
    EXPECT_NEAR(extend(cubic, s, p), cubic(p), 1e-12);
  }
}

TEST(ParseSurface, Descriptors) {
  const auto a = parse_surface(R"({"kind":"sphere","center":[0,0,0.1],"radius":0.5})");
  EXPECT_NEAR(a.value(Vec3(0, 0, 0.6)), 0.0, 1e-15);
  const auto b = parse_surface(R"({"kind":"spheroid","semi_axes":[0.5,0.5,0.25],"tube_half_width":0.05})");
  EXPECT_DOUBLE_EQ(b.tube_half_width(), 0.05);
  EXPECT_EQ(parse_surface(R"({"kind":"poly_isoline"})").kind_name(), LevelSetSurface::poly_isoline().kind_name());
}

TEST(ParseSurface, RejectsMalformedInput) {
  for (const char* text : {"{", R"({"kind":"torus"})", R"({"kind":"sphere","radius":-1})",
                           R"({"kind":"spheroid","semi_axes":[1,2]})"}) {
    try {
      (void)parse_surface(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig) << text;
    }
  }
}

}  // namespace
}  // namespace surfhelm
