#include "surfhelm/io.hpp"

#include <limits>
#include <ostream>

namespace surfhelm {

namespace {

struct PrecisionGuard {
  explicit PrecisionGuard(std::ostream& os)
      : os_(os), old_(os.precision(std::numeric_limits<double>::max_digits10)) {}
  ~PrecisionGuard() { os_.precision(old_); }
  std::ostream& os_;
  std::streamsize old_;
};

}  // namespace

void write_mesh(const BackgroundMesh& mesh, std::ostream& os) {
  PrecisionGuard guard(os);
  os << "# surfhelm mesh\n";
  os << "vertices " << mesh.num_vertices() << '\n';
  for (const Vec3& v : mesh.vertices()) os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  os << "tetrahedra " << mesh.num_tets() << '\n';
  for (const Tet& t : mesh.tets()) os << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

void write_surface(std::span<const SurfaceCell> cells, std::ostream& os) {
  PrecisionGuard guard(os);
  std::size_t n = 0;
  for (const auto& c : cells) n += c.triangles.size();
  os << "# surfhelm surface\n";
  os << "triangles " << n << '\n';
  for (const auto& c : cells) {
    for (const Triangle& tri : c.triangles) {
      for (int i = 0; i < 3; ++i) {
        const Vec3& p = tri[static_cast<std::size_t>(i)];
        os << p.x() << ' ' << p.y() << ' ' << p.z() << (i < 2 ? ' ' : '\n');
      }
    }
  }
}

void write_system(const ComplexSparseSystem& system, std::ostream& os) {
  PrecisionGuard guard(os);
  os << "# surfhelm system\n";
  os << "system " << system.dim() << ' ' << system.matrix.nonZeros() << '\n';
  for (Eigen::Index col = 0; col < system.matrix.outerSize(); ++col) {
    for (ComplexSparse::InnerIterator it(system.matrix, col); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
  os << "rhs " << system.rhs.size() << '\n';
  for (Eigen::Index i = 0; i < system.rhs.size(); ++i) {
    os << system.rhs[i].real() << ' ' << system.rhs[i].imag() << '\n';
  }
}

}  // namespace surfhelm
