// Command-line driver: single solves, convergence sweeps, geometry sweeps and
// the near-eigenvalue scan. Exit codes: 0 ok, 2 config, 3 geometry, 4 solver.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "surfhelm/driver.hpp"
#include "surfhelm/errors.hpp"
#include "surfhelm/io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitSolver = 4;

struct Flags {
  std::string config;
  std::vector<std::string> surfaces;
  std::string cells;
  std::string poly_cells;
  std::string k2;
  std::optional<double> gamma_s_im;
  std::optional<double> gamma_j_im;
  std::optional<double> box_half_width;
  std::string solution;
  bool no_stabilization = false;
  std::string out;
  bool plot = false;
  std::string dump_mesh;
  std::string dump_surface;
  std::string dump_system;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration (flags override it)");
  cmd->add_option("--surface", f.surfaces,
                  "surface JSON or preset: sphere, unit-sphere, spheroid:<R_min>, poly");
  cmd->add_option("--cells", f.cells, "cells per axis: n or n1,n2,...");
  cmd->add_option("--k2", f.k2, "k^2: value, list, or range:start:stop:step");
  cmd->add_option("--gamma-s-im", f.gamma_s_im, "Im(gamma_s)");
  cmd->add_option("--gamma-j-im", f.gamma_j_im, "Im(gamma_j)");
  cmd->add_option("--box-half-width", f.box_half_width, "background box [-w,w]^3");
  cmd->add_option("--solution", f.solution, "manufactured solution: cubic, xyz, x1, one");
  cmd->add_flag("--no-stabilization", f.no_stabilization, "plain Galerkin (gamma_s = gamma_j = 0)");
  cmd->add_option("--out", f.out, "output directory for CSV/SVG/metadata");
  cmd->add_flag("--plot", f.plot, "write SVG plots generated from the CSV output");
}

surfhelm::RunConfig build_config(const Flags& f, surfhelm::RunConfig cfg) {
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw surfhelm::Error(surfhelm::ErrorKind::InvalidConfig, "cannot read " + f.config);
    std::stringstream ss;
    ss << is.rdbuf();
    cfg = surfhelm::parse_run_config(ss.str());
  }
  if (!f.surfaces.empty()) cfg.surfaces = f.surfaces;
  if (!f.cells.empty()) cfg.cells = surfhelm::parse_cells(f.cells);
  if (!f.poly_cells.empty()) cfg.poly_cells = surfhelm::parse_cells(f.poly_cells);
  if (!f.k2.empty()) cfg.k2 = surfhelm::parse_k2(f.k2);
  if (f.gamma_s_im) cfg.gamma_s_im = *f.gamma_s_im;
  if (f.gamma_j_im) cfg.gamma_j_im = *f.gamma_j_im;
  if (f.box_half_width) cfg.box_half_width = f.box_half_width;
  if (!f.solution.empty()) cfg.solution = f.solution;
  if (f.no_stabilization) cfg.stabilized = false;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.plot) cfg.plot = true;
  cfg.validate();
  return cfg;
}

void print_rates(const std::string& label, const surfhelm::ConvergenceRecord& record) {
  std::printf("%-24s %10s %8s %14s %14s %14s\n", label.c_str(), "h", "ndof", "err_l2", "err_h1t",
              "err_energy");
  for (const auto& e : record.entries()) {
    std::printf("%-24s %10.5f %8zu %14.6e %14.6e %14.6e\n", "", e.h, e.ndof, e.errors.l2, e.errors.h1t,
                e.errors.energy);
  }
  const auto s = surfhelm::fit_rates(record);
  std::printf("%-24s slopes: l2 %.3f  h1t %.3f  energy %.3f\n", "", s.l2, s.h1t, s.energy);
}

int exit_code_for(const surfhelm::Error& e) {
  switch (surfhelm::category(e.kind())) {
    case surfhelm::ErrorCategory::Config: return kExitConfig;
    case surfhelm::ErrorCategory::Geometry: return kExitGeometry;
    case surfhelm::ErrorCategory::Solver: return kExitSolver;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized cut finite element solver for the Helmholtz-Beltrami equation"};
  app.require_subcommand(1);

  Flags solve_flags, conv_flags, scan_flags, geo_flags;

  auto* solve_cmd = app.add_subcommand("solve", "single manufactured-solution solve");
  add_common(solve_cmd, solve_flags);
  solve_cmd->add_option("--dump-mesh", solve_flags.dump_mesh, "write the background mesh");
  solve_cmd->add_option("--dump-surface", solve_flags.dump_surface, "write the discrete surface triangles");
  solve_cmd->add_option("--dump-system", solve_flags.dump_system, "write the assembled system triplets");

  auto* conv_cmd = app.add_subcommand("convergence", "refinement study for one or more k^2");
  add_common(conv_cmd, conv_flags);

  auto* scan_cmd = app.add_subcommand("eigen-scan", "k^2 scan on a fixed mesh, with and without stabilization");
  add_common(scan_cmd, scan_flags);

  auto* geo_cmd = app.add_subcommand("geometry-sweep", "refinement study over several surfaces");
  add_common(geo_cmd, geo_flags);
  geo_cmd->add_option("--poly-cells", geo_flags.poly_cells, "refinements for the polynomial surface");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve_cmd->parsed()) {
      const auto cfg = build_config(solve_flags, {});
      const auto s = surfhelm::run_solve(cfg);
      if (!solve_flags.dump_mesh.empty() || !solve_flags.dump_surface.empty() ||
          !solve_flags.dump_system.empty()) {
        const auto surface = surfhelm::surface_from_argument(cfg.surfaces.front());
        const auto box = cfg.box_half_width ? surfhelm::Box::cube(*cfg.box_half_width)
                                            : surfhelm::default_box(surface);
        const surfhelm::Discretization disc(surface, box, cfg.cells.front());
        if (!solve_flags.dump_mesh.empty()) {
          std::ofstream os(solve_flags.dump_mesh);
          surfhelm::write_mesh(disc.mesh(), os);
        }
        if (!solve_flags.dump_surface.empty()) {
          std::ofstream os(solve_flags.dump_surface);
          surfhelm::write_surface(disc.cells(), os);
        }
        if (!solve_flags.dump_system.empty()) {
          const surfhelm::ManufacturedCase mms{surfhelm::AmbientScalarField::preset(cfg.solution), surface,
                                               cfg.k2.front()};
          const auto load = surfhelm::assemble_load(disc.active(), disc.cells(), mms.forcing_function(), surface);
          std::ofstream os(solve_flags.dump_system);
          surfhelm::write_system(
              surfhelm::combine(disc.components(), load, cfg.params(cfg.k2.front(), cfg.stabilized)), os);
        }
      }
      std::printf("surface=%s cells=%d h=%.6f ndof=%zu k2=%g stabilized=%d residual=%.3e "
                  "err_l2=%.6e err_h1t=%.6e err_energy=%.6e\n",
                  cfg.surfaces.front().c_str(), s.cells_per_axis, s.h, s.ndof, s.k2, s.stabilized ? 1 : 0,
                  s.relative_residual, s.errors.l2, s.errors.h1t, s.errors.energy);
    } else if (conv_cmd->parsed()) {
      surfhelm::RunConfig defaults;
      defaults.cells = {8, 16, 32, 64};
      defaults.k2 = {1.0, 4.0, 16.0};
      const auto cfg = build_config(conv_flags, defaults);
      const auto records = surfhelm::run_convergence(cfg);
      for (std::size_t i = 0; i < records.size(); ++i) {
        std::ostringstream label;
        label << "k2=" << cfg.k2[i];
        print_rates(label.str(), records[i]);
      }
    } else if (scan_cmd->parsed()) {
      surfhelm::RunConfig defaults;
      defaults.surfaces = {"unit-sphere"};
      defaults.cells = {16};
      defaults.k2 = surfhelm::parse_k2("range:1.5:2.5:0.025");
      const auto cfg = build_config(scan_flags, defaults);
      const auto rows = surfhelm::run_eigen_scan(cfg);
      std::ostringstream os;
      surfhelm::write_eigen_scan_csv(rows, os);
      std::fputs(os.str().c_str(), stdout);
    } else if (geo_cmd->parsed()) {
      surfhelm::RunConfig defaults;
      defaults.surfaces = {"spheroid:0.25", "spheroid:0.4", "spheroid:0.5", "poly"};
      defaults.cells = {16, 32, 64};
      const auto cfg = build_config(geo_flags, defaults);
      for (const auto& r : surfhelm::run_geometry_sweep(cfg)) print_rates(r.surface, r.record);
    }
  } catch (const surfhelm::Error& e) {
    std::fprintf(stderr, "surfhelm: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "surfhelm: %s\n", e.what());
    return 1;
  }
  return 0;
}
