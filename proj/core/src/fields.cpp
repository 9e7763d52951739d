#include "surfhelm/fields.hpp"

#include "surfhelm/errors.hpp"

namespace surfhelm {

AmbientScalarField AmbientScalarField::constant(double c) {
  return AmbientScalarField(
      "constant", [c](const Vec3&) { return c; }, [](const Vec3&) { return Vec3::Zero().eval(); },
      [](const Vec3&) { return Mat3::Zero().eval(); });
}

AmbientScalarField AmbientScalarField::linear(const Vec3& a, double c) {
  return AmbientScalarField(
      "linear", [a, c](const Vec3& x) { return a.dot(x) + c; }, [a](const Vec3&) { return a; },
      [](const Vec3&) { return Mat3::Zero().eval(); });
}

AmbientScalarField AmbientScalarField::shifted_triple_product(const Vec3& shift) {
  return AmbientScalarField(
      "triple_product",
      [shift](const Vec3& x) {
        const Vec3 d = x - shift;
        return d.x() * d.y() * d.z();
      },
      [shift](const Vec3& x) {
        const Vec3 d = x - shift;
        return Vec3(d.y() * d.z(), d.x() * d.z(), d.x() * d.y());
      },
      [shift](const Vec3& x) {
        const Vec3 d = x - shift;
        Mat3 h = Mat3::Zero();
        h(0, 1) = h(1, 0) = d.z();
        h(0, 2) = h(2, 0) = d.y();
        h(1, 2) = h(2, 1) = d.x();
        return h;
      });
}

AmbientScalarField AmbientScalarField::preset(std::string_view name) {
  AmbientScalarField field = [&] {
    if (name == "cubic") return shifted_triple_product(Vec3::Constant(0.5));
    if (name == "xyz") return shifted_triple_product(Vec3::Zero());
    if (name == "x1") return linear(Vec3::UnitX());
    if (name == "one") return constant(1.0);
    throw Error(ErrorKind::InvalidConfig, "unknown manufactured solution '" + std::string(name) + "'");
  }();
  field.name_ = std::string(name);
  return field;
}

}  // namespace surfhelm
