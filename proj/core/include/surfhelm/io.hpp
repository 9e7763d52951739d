#pragma once

#include <iosfwd>
#include <span>

#include "surfhelm/cut.hpp"
#include "surfhelm/fem.hpp"
#include "surfhelm/mesh.hpp"

namespace surfhelm {

// Plain-text dumps for external visualization and verification. Numbers are
// written with round-trip precision; '#' lines are comments.
//
//   mesh:     "vertices N" then N lines "x y z",
//             "tetrahedra M" then M lines "v0 v1 v2 v3" (0-based)
//   surface:  "triangles N" then N lines "x0 y0 z0 x1 y1 z1 x2 y2 z2"
//   system:   "system N NNZ" then NNZ lines "row col re im" (0-based,
//             column-major order), then "rhs N" and N lines "re im"

void write_mesh(const BackgroundMesh& mesh, std::ostream& os);
void write_surface(std::span<const SurfaceCell> cells, std::ostream& os);
void write_system(const ComplexSparseSystem& system, std::ostream& os);

}  // namespace surfhelm
