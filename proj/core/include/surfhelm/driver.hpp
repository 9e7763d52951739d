#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surfhelm/cut.hpp"
#include "surfhelm/fem.hpp"
#include "surfhelm/fields.hpp"
#include "surfhelm/geometry.hpp"
#include "surfhelm/mesh.hpp"
#include "surfhelm/mms.hpp"
#include "surfhelm/solver.hpp"

namespace surfhelm {

/// Default mesh box: [−2.6,2.6]³ for the polynomial isoline, else [−1.5,1.5]³.
Box default_box(const LevelSetSurface& surface);

/// Accepts a JSON descriptor or a preset name: "sphere" (r = ½),
/// "unit-sphere", "spheroid:<R_min>" (semi-axes ½, ½, R_min), "poly".
LevelSetSurface surface_from_argument(std::string_view text);

/// "16" or "8,16,32". Throws InvalidConfig unless strictly increasing and ≥ 1.
std::vector<int> parse_cells(std::string_view text);

/// "1", "1,4,16" or "range:start:stop:step" (stop included when it lies on the grid).
std::vector<double> parse_k2(std::string_view text);

struct RunConfig {
  std::vector<std::string> surfaces{"sphere"};
  std::optional<double> box_half_width;
  std::vector<int> cells{16};
  /// Refinements for the polynomial isoline in geometry sweeps.
  std::vector<int> poly_cells{32, 48, 64};
  std::vector<double> k2{1.0};
  double gamma_s_im = 1.0;
  double gamma_j_im = 1e-3;
  bool stabilized = true;
  std::string solution = "cubic";
  std::filesystem::path out_dir;
  bool plot = false;

  /// Throws InvalidConfig on violated invariants.
  void validate() const;
  StabilizationParams params(double k2_value, bool stabilized_run) const;
};

/// Loads a RunConfig from JSON text; keys mirror the command-line flags
/// (surface, box_half_width, cells, poly_cells, k2, gamma_s_im, gamma_j_im,
/// stabilization, solution, out, plot).
RunConfig parse_run_config(std::string_view json_text);

/// Mesh, active set, cut cells and real operators for one (surface, mesh).
class Discretization {
 public:
  Discretization(const LevelSetSurface& surface, const Box& box, int cells_per_axis);

  const LevelSetSurface& surface() const noexcept { return surface_; }
  const BackgroundMesh& mesh() const noexcept { return *mesh_; }
  const NodalLevelSet& level_set() const noexcept { return *level_set_; }
  const ActiveMesh& active() const noexcept { return active_; }
  const std::vector<SurfaceCell>& cells() const noexcept { return cells_; }
  const SystemComponents& components() const noexcept { return components_; }
  double h() const noexcept { return components_.h; }

 private:
  LevelSetSurface surface_;
  std::unique_ptr<BackgroundMesh> mesh_;
  std::unique_ptr<NodalLevelSet> level_set_;
  ActiveMesh active_;
  std::vector<SurfaceCell> cells_;
  SystemComponents components_;
};

struct SolveSummary {
  int cells_per_axis = 0;
  double h = 0.0;
  std::size_t ndof = 0;
  double k2 = 0.0;
  bool stabilized = true;
  double relative_residual = 0.0;
  ErrorNorms errors;
  /// ‖u_h‖ via the surface mass matrix.
  double uh_norm = 0.0;
  /// ‖f^e‖ on Σ_h.
  double f_norm = 0.0;
  /// Im(γ_s)⁻¹((hk)⁻² + 1)‖f^e‖, +inf when unstabilized.
  double stability_bound = 0.0;
  ComplexVector solution;
};

/// Manufactured-solution solve on an existing discretization.
SolveSummary solve_manufactured(const Discretization& disc, const AmbientScalarField& u, double k2,
                                const StabilizationParams& params);

/// mesh → cut → assemble → solve → errors for cfg.cells.front(), cfg.k2.front().
SolveSummary run_solve(const RunConfig& cfg);

/// One record per k² on cfg.surfaces.front(). Writes convergence_k2_<k2>.csv
/// (and .svg with cfg.plot) when cfg.out_dir is set.
std::vector<ConvergenceRecord> run_convergence(const RunConfig& cfg,
                                               std::vector<std::vector<SolveSummary>>* runs = nullptr);

struct EigenScanRow {
  double k2 = 0.0;
  double err_stab = 0.0;
  /// +inf when the unstabilized system is singular.
  double err_unstab = 0.0;
};

/// Fixed mesh cfg.cells.front(), stabilized and plain Galerkin errors over cfg.k2.
/// Writes eigen_scan.csv (and .svg) when cfg.out_dir is set.
std::vector<EigenScanRow> run_eigen_scan(const RunConfig& cfg,
                                         std::vector<SolveSummary>* stabilized_runs = nullptr);

struct GeometrySweepResult {
  std::string surface;
  ConvergenceRecord record;
  RateSlopes slopes;
};

/// k² = cfg.k2.front() convergence on every surface in cfg.surfaces; the
/// polynomial isoline uses cfg.poly_cells.
std::vector<GeometrySweepResult> run_geometry_sweep(const RunConfig& cfg);

void write_eigen_scan_csv(const std::vector<EigenScanRow>& rows, std::ostream& os);

}  // namespace surfhelm
