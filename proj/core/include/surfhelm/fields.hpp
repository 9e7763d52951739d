#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "surfhelm/geometry.hpp"

namespace surfhelm {

/// Scalar function on R³ with analytic gradient and Hessian.
class AmbientScalarField {
 public:
  using ValueFn = std::function<double(const Vec3&)>;
  using GradientFn = std::function<Vec3(const Vec3&)>;
  using HessianFn = std::function<Mat3(const Vec3&)>;

  AmbientScalarField(std::string name, ValueFn value, GradientFn gradient, HessianFn hessian)
      : name_(std::move(name)),
        value_(std::move(value)),
        gradient_(std::move(gradient)),
        hessian_(std::move(hessian)) {}

  /// c
  static AmbientScalarField constant(double c);
  /// a·x + c
  static AmbientScalarField linear(const Vec3& a, double c = 0.0);
  /// (x − s₁)(y − s₂)(z − s₃)
  static AmbientScalarField shifted_triple_product(const Vec3& shift);

  /// Looks up a named preset: "cubic" ((x−½)(y−½)(z−½)), "x1", "xyz", "one".
  /// Throws Error(InvalidConfig) for unknown names.
  static AmbientScalarField preset(std::string_view name);

  double operator()(const Vec3& x) const { return value_(x); }
  double value(const Vec3& x) const { return value_(x); }
  Vec3 gradient(const Vec3& x) const { return gradient_(x); }
  Mat3 hessian(const Vec3& x) const { return hessian_(x); }

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

}  // namespace surfhelm
