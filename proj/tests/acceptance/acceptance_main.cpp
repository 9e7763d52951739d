// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "oracles/two_tet.hpp"
#include "surfhelm/driver.hpp"
#include "surfhelm/errors.hpp"

namespace {

using namespace surfhelm;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Report {
  int failures = 0;
  void line(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

/// Every stabilized solve from criteria 1–5, checked against its bound.
struct BoundLedger {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  void add(const SolveSummary& s) {
    if (!s.stabilized) return;
    ++checked;
    if (!(s.uh_norm <= s.stability_bound)) ++violations;
    worst_ratio = std::max(worst_ratio, s.uh_norm / s.stability_bound);
  }
};

void criteria_1_to_3(Report& report, BoundLedger& bounds) {
  Timer timer;
  RunConfig cfg;
  cfg.surfaces = {"sphere"};
  cfg.box_half_width = 1.5;
  cfg.cells = {8, 16, 32, 64};
  cfg.k2 = {1.0, 4.0, 16.0};
  std::vector<std::vector<SolveSummary>> runs;
  const auto records = run_convergence(cfg, &runs);
  const double elapsed = timer.seconds();
  for (const auto& per_k : runs)
    for (const auto& s : per_k) bounds.add(s);

  std::vector<RateSlopes> slopes;
  for (const auto& r : records) slopes.push_back(fit_rates(r));

  std::string d1 = "sphere r=1/2, k2=1, L2 slope " + fmt("%.3f", slopes[0].l2) + " in [1.7, 2.3], runtime " +
                   fmt("%.1f s", elapsed) + " < 180 s";
  report.line(1, in_band(slopes[0].l2, 1.7, 2.3) && elapsed < 180.0, d1);

  const double h_finest = records[2].entries().back().h;
  const double hk = h_finest * 4.0;
  bool ok2 = hk <= 0.5;
  std::string d2 = "L2 slopes";
  for (std::size_t i = 1; i < 3; ++i) {
    d2 += fmt(" k2=%g:", cfg.k2[i]) + fmt("%.3f", slopes[i].l2);
    ok2 = ok2 && in_band(slopes[i].l2, 1.7, 2.3);
  }
  d2 += " in [1.7, 2.3], hk on finest mesh " + fmt("%.3f", hk) + " <= 0.5";
  report.line(2, ok2, d2);

  bool ok3 = true;
  std::string d3 = "energy slopes";
  for (std::size_t i = 0; i < 3; ++i) {
    d3 += fmt(" k2=%g:", cfg.k2[i]) + fmt("%.3f", slopes[i].energy);
    ok3 = ok3 && in_band(slopes[i].energy, 0.8, 1.3);
  }
  d3 += " in [0.8, 1.3]";
  report.line(3, ok3, d3);
}

void criterion_4(Report& report, BoundLedger& bounds) {
  Timer timer;
  bool ok = true;
  std::string detail = "L2 slopes";
  for (const char* surface : {"spheroid:0.25", "spheroid:0.4"}) {
    RunConfig cfg;
    cfg.surfaces = {surface};
    cfg.cells = {16, 32, 64};
    cfg.k2 = {1.0};
    std::vector<std::vector<SolveSummary>> runs;
    const auto records = run_convergence(cfg, &runs);
    for (const auto& s : runs.front()) bounds.add(s);
    const double slope = fit_rates(records.front()).l2;
    detail += std::string(" ") + surface + ":" + fmt("%.3f", slope);
    ok = ok && in_band(slope, 1.7, 2.3);
  }
  detail += " in [1.7, 2.3]";
  RunConfig poly;
  poly.surfaces = {"poly"};
  poly.cells = poly.poly_cells;
  poly.k2 = {1.0};
  std::vector<std::vector<SolveSummary>> runs;
  const auto records = run_convergence(poly, &runs);
  for (const auto& s : runs.front()) bounds.add(s);
  const double slope = fit_rates(records.front()).l2;
  ok = ok && slope >= 1.6;
  const double elapsed = timer.seconds();
  ok = ok && elapsed < 600.0;
  detail += ", poly (3 refinements):" + fmt("%.3f", slope) + " >= 1.6, runtime " + fmt("%.1f s", elapsed) +
            " < 600 s";
  report.line(4, ok, detail);
}

void criterion_5(Report& report, BoundLedger& bounds) {
  Timer timer;
  RunConfig cfg;
  cfg.surfaces = {"unit-sphere"};
  cfg.cells = {16};
  cfg.k2 = parse_k2("range:1.5:2.5:0.025");
  std::vector<SolveSummary> stab_runs;
  const auto rows = run_eigen_scan(cfg, &stab_runs);
  for (const auto& s : stab_runs) bounds.add(s);
  const double elapsed = timer.seconds();

  double stab_max = 0.0, unstab_max = 0.0, unstab_arg = 0.0;
  for (const auto& r : rows) {
    stab_max = std::max(stab_max, r.err_stab);
    if (r.err_unstab > unstab_max) {
      unstab_max = r.err_unstab;
      unstab_arg = r.k2;
    }
  }
  const double stab_first = rows.front().err_stab;
  const bool stab_ok = stab_max <= 20.0 * stab_first;
  const bool unstab_ok = unstab_max >= 10.0 * stab_max && unstab_arg > 2.0;
  std::string d = "stabilized max " + fmt("%.4g", stab_max) + " <= 20 x err(1.5)=" + fmt("%.4g", stab_first) +
                  " [" + (stab_ok ? "ok" : "violated") + "]; unstabilized max " + fmt("%.4g", unstab_max) +
                  " at k2=" + fmt("%.3f", unstab_arg) + ", needs >= 10 x stabilized max and k2 > 2 [" +
                  (unstab_ok ? "ok" : "violated") + "]; runtime " + fmt("%.1f s", elapsed) + " < 300 s";
  report.line(5, stab_ok && unstab_ok && elapsed < 300.0, d);
}

void criterion_7(Report& report) {
  std::mt19937 rng(20240611);
  const double cell = 3.0 / 16.0;
  std::uniform_real_distribution<double> shift(0.0, cell);
  const auto u = AmbientScalarField::preset("cubic");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, worst_residual = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 c(shift(rng), shift(rng), shift(rng));
    try {
      const Discretization disc(LevelSetSurface::sphere(c, 0.5), Box::cube(1.5), 16);
      const auto s = solve_manufactured(disc, u, 1.0, StabilizationParams::stabilized(1.0));
      worst_residual = std::max(worst_residual, s.relative_residual);
      if (!(s.relative_residual <= 1e-8)) ++failures;
      lo = std::min(lo, s.errors.l2);
      hi = std::max(hi, s.errors.l2);
    } catch (const Error& e) {
      std::printf("  translation %d failed: %s\n", trial, e.what());
      ++failures;
    }
  }
  const double ratio = hi / lo;
  report.line(7, failures == 0 && ratio <= 5.0,
              "20 translated spheres at n=16: " + std::to_string(failures) + " failures, worst residual " +
                  fmt("%.2e", worst_residual) + " <= 1e-8, L2 max/min " + fmt("%.3f", ratio) + " <= 5");
}

void criterion_8(Report& report) {
  const double r = 0.5;
  const auto surface = LevelSetSurface::sphere(Vec3::Zero(), r);
  std::vector<double> h, area_err, max_b, normal_err;
  for (int n : {8, 16, 32, 64}) {
    const auto mesh = build_background_mesh(Box::cube(1.5), n);
    const auto ls = interpolate_level_set(mesh, surface);
    const auto active = extract_active_mesh(ls);
    const auto cells = cut_active_mesh(active, ls);
    double b = 0.0, nerr = 0.0;
    for (const auto& c : cells)
      for (const auto& tri : c.triangles)
        for (const auto& x : tri) {
          b = std::max(b, std::abs(x.norm() - r));
          nerr = std::max(nerr, (x.normalized() - c.normal).norm());
        }
    h.push_back(mesh.h());
    area_err.push_back(std::abs(surface_area(cells) - 4.0 * std::numbers::pi * r * r));
    max_b.push_back(b);
    normal_err.push_back(nerr);
  }
  const double sa = oracle::loglog_slope(h, area_err);
  const double sb = oracle::loglog_slope(h, max_b);
  const double sn = oracle::loglog_slope(h, normal_err);
  report.line(8, sa >= 1.8 && sb >= 1.8 && sn >= 0.8,
              "area order " + fmt("%.3f", sa) + " >= 1.8, max|b| order " + fmt("%.3f", sb) +
                  " >= 1.8, max|n - n_h| order " + fmt("%.3f", sn) + " >= 0.8");
}

void criterion_9(Report& report) {
  std::vector<std::string> failed;
  int total = 0;
  auto check = [&](const std::string& name, bool ok) {
    ++total;
    if (!ok) failed.push_back(name);
  };
  auto guarded = [&](const std::string& name, const std::function<bool()>& f) {
    try {
      check(name, f());
    } catch (const std::exception& e) {
      check(name + " (" + e.what() + ")", false);
    }
  };

  guarded("polygon area", [] {
    const std::array<Vec3, 4> ref{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    const std::array<double, 4> v{-1, -1, 1, 1};
    const double oracle_area = oracle::convex_polygon_area(oracle::edge_crossings(ref, v));
    return std::abs(intersect_tet(ref, v).area - oracle_area) <= 1e-14 &&
           std::abs(oracle_area - std::sqrt(2.0) / 4.0) <= 1e-15;
  });

  guarded("dense mini-assembly", [] {
    const auto s = oracle::two_tet_setup();
    const auto ref = oracle::dense_two_tet(s);
    const auto parts = assemble_components(s.active, s.cells);
    const auto sys = combine(parts, RealVector::Ones(static_cast<Eigen::Index>(s.active.num_dofs())),
                             StabilizationParams::stabilized(1.0));
    const Complex i(0.0, 1.0);
    const Eigen::MatrixXcd expected = ref.S.cast<Complex>() - (1.0 - i * ref.h * ref.h) * ref.M.cast<Complex>() +
                                      1e-3 * i * ref.J.cast<Complex>();
    return (Eigen::MatrixXcd(sys.matrix) - expected).cwiseAbs().maxCoeff() <= 1e-13 &&
           std::abs(ref.J(s.active.dof_of_vertex[0], s.active.dof_of_vertex[0]) - 1.5 * std::sqrt(3.0)) <= 1e-14;
  });

  guarded("2x2 inverse", [] {
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd a(2, 2);
    a << 2.0, i, i, 1.0;
    ComplexSparseSystem sys;
    sys.matrix = a.sparseView();
    sys.rhs = ComplexVector::Zero(2);
    sys.rhs(0) = 1.0;
    const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    ComplexVector expected(2);
    expected << a(1, 1) / det, -a(1, 0) / det;
    return (solve(sys).solution - expected).norm() <= 1e-15;
  });

  guarded("finite-difference tangential Laplacian", [] {
    const auto half = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
    const auto u = AmbientScalarField::preset("cubic");
    const ManufacturedCase mms{u, half, 1.0};
    const Vec3 p(0.5, 0, 0);
    const double fd = -oracle::sphere_laplacian_fd(u, Vec3::Zero(), 0.5, p) - u(p);
    bool ok = std::abs(mms.forcing(p) - fd) <= 1e-5 * std::abs(fd);
    const auto unit = LevelSetSurface::sphere(Vec3::Zero(), 1.0);
    const auto xyz = AmbientScalarField::preset("xyz");
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int k = 0; k < 100; ++k) {
      const Vec3 x = Vec3(g(rng), g(rng), g(rng)).normalized();
      if (std::abs(x.z()) > 0.95) continue;
      ok = ok && std::abs(surface_laplacian(xyz, unit, x) - oracle::sphere_laplacian_fd(xyz, Vec3::Zero(), 1.0, x)) <= 1e-5;
    }
    return ok;
  });

  guarded("eigenfunction identities", [] {
    const auto unit = LevelSetSurface::sphere(Vec3::Zero(), 1.0);
    const auto x1 = AmbientScalarField::linear(Vec3(1, 0, 0));
    const auto xyz = AmbientScalarField::preset("xyz");
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    bool ok = true;
    for (int k = 0; k < 1000; ++k) {
      const Vec3 x = Vec3(g(rng), g(rng), g(rng)).normalized();
      ok = ok && std::abs(surface_laplacian(x1, unit, x) + 2.0 * x.x()) <= 1e-12;
      ok = ok && std::abs(surface_laplacian(xyz, unit, x) + 12.0 * x.x() * x.y() * x.z()) <= 1e-12;
    }
    return ok;
  });

  guarded("poly isoline termwise value", [] {
    return LevelSetSurface::poly_isoline().value(Vec3::Zero()) == (16.0 + 4.0 + 16.0 + 1.0 + 16.0 + 1.0) - 15.0;
  });

  guarded("spheroid pole curvature", [] {
    const auto s = LevelSetSurface::spheroid(Vec3(0.5, 0.5, 0.25));
    const Vec3 pole(0, 0, 0.25);
    const double step = 1e-5;
    double fd = 0.0;
    for (int d = 0; d < 3; ++d) {
      const Vec3 e = Vec3::Unit(d) * step;
      fd += (unit_normal(s, pole + e)(d) - unit_normal(s, pole - e)(d)) / (2 * step);
    }
    return std::abs(mean_curvature_divergence(s, pole) - fd) <= 1e-5 * std::abs(fd);
  });

  guarded("degree-4 monomials", [] {
    SurfaceCell cell;
    cell.triangles = {Triangle{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}};
    cell.area = 0.5;
    bool ok = true;
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        double s = 0.0;
        for (const auto& q : quadrature_on_cell(cell, 4)) s += q.weight * std::pow(q.x.x(), a) * std::pow(q.x.y(), b);
        ok = ok && std::abs(s - std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0)) <= 1e-14;
      }
    return ok;
  });

  std::string detail = std::to_string(total - static_cast<int>(failed.size())) + "/" + std::to_string(total) +
                       " oracle checks";
  for (const auto& f : failed) detail += "; failed: " + f;
  report.line(9, failed.empty(), detail);
}

}  // namespace

int main() {
  Report report;
  BoundLedger bounds;
  const auto guard = [&](int id, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report.line(id, false, std::string("aborted: ") + e.what());
    }
  };
  guard(1, [&] { criteria_1_to_3(report, bounds); });
  guard(4, [&] { criterion_4(report, bounds); });
  guard(5, [&] { criterion_5(report, bounds); });
  report.line(6, bounds.violations == 0 && bounds.checked > 0,
              std::to_string(bounds.checked) + " stabilized solves, " + std::to_string(bounds.violations) +
                  " violations of ||u_h|| <= Im(gamma_s)^-1((hk)^-2 + 1)||f||, largest ratio " +
                  fmt("%.3e", bounds.worst_ratio));
  guard(7, [&] { criterion_7(report); });
  guard(8, [&] { criterion_8(report); });
  guard(9, [&] { criterion_9(report); });
  std::printf("%s: %d criterion failure(s)\n", report.failures == 0 ? "ACCEPTED" : "REJECTED", report.failures);
  return report.failures == 0 ? 0 : 1;
}
