#include "surfhelm/driver.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "surfhelm/errors.hpp"
#include "surfhelm/svg_plot.hpp"

namespace surfhelm {

namespace {

double parse_double(std::string_view s) {
  std::string text(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidConfig, "not a number: '" + text + "'");
  }
  return v;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidConfig, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string label_for(std::string_view surface_arg) {
  std::string out;
  for (char c : surface_arg) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  }
  if (!out.empty() && out.front() == '_') {
    // JSON descriptors get a short stable label instead of their full text.
    return "custom_" + std::to_string(std::hash<std::string_view>{}(surface_arg) % 100000);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::InvalidConfig, "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string convergence_csv(const ConvergenceRecord& record) {
  std::ostringstream os;
  record.write_csv(os);
  return os.str();
}

}  // namespace

Box default_box(const LevelSetSurface& surface) {
  if (std::holds_alternative<PolyIsoline>(surface.shape())) return Box::cube(2.6);
  return Box::cube(1.5);
}

LevelSetSurface surface_from_argument(std::string_view text) {
  if (!text.empty() && text.front() == '{') return parse_surface(text);
  if (text == "sphere") return LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  if (text == "unit-sphere") return LevelSetSurface::sphere(Vec3::Zero(), 1.0);
  if (text == "poly") return LevelSetSurface::poly_isoline();
  if (text.starts_with("spheroid:")) {
    const double rmin = parse_double(text.substr(9));
    return LevelSetSurface::spheroid(Vec3(0.5, 0.5, rmin));
  }
  throw Error(ErrorKind::InvalidConfig, "unknown surface preset '" + std::string(text) + "'");
}

std::vector<int> parse_cells(std::string_view text) {
  std::vector<int> cells;
  for (auto part : split(text, ',')) cells.push_back(parse_int(part));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 1) throw Error(ErrorKind::InvalidConfig, "cells per axis must be positive");
    if (i > 0 && cells[i] <= cells[i - 1]) {
      throw Error(ErrorKind::InvalidConfig, "refinement list must be strictly increasing");
    }
  }
  return cells;
}

std::vector<double> parse_k2(std::string_view text) {
  if (text.starts_with("range:")) {
    const auto parts = split(text.substr(6), ':');
    if (parts.size() != 3) {
      throw Error(ErrorKind::InvalidConfig, "k2 range must read range:start:stop:step");
    }
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0)) throw Error(ErrorKind::InvalidConfig, "k2 scan step must be positive");
    if (stop < start) throw Error(ErrorKind::InvalidConfig, "k2 range stop precedes start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

void RunConfig::validate() const {
  if (surfaces.empty()) throw Error(ErrorKind::InvalidConfig, "no surface given");
  for (const auto& s : surfaces) (void)surface_from_argument(s);
  for (const auto* list : {&cells, &poly_cells}) {
    if (list->empty()) throw Error(ErrorKind::InvalidConfig, "empty refinement list");
    for (std::size_t i = 0; i < list->size(); ++i) {
      if ((*list)[i] < 1 || (i > 0 && (*list)[i] <= (*list)[i - 1])) {
        throw Error(ErrorKind::InvalidConfig, "refinement list must be positive and strictly increasing");
      }
    }
  }
  if (k2.empty()) throw Error(ErrorKind::InvalidConfig, "no k2 value given");
  for (double v : k2) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidConfig, "k2 must be >= 0");
  }
  if (box_half_width && !(*box_half_width > 0.0)) {
    throw Error(ErrorKind::InvalidBox, "box half-width must be positive");
  }
  if (stabilized) (void)StabilizationParams::stabilized(1.0, gamma_s_im, gamma_j_im);
  (void)AmbientScalarField::preset(solution);
}

StabilizationParams RunConfig::params(double k2_value, bool stabilized_run) const {
  const double k = std::sqrt(k2_value);
  return stabilized_run ? StabilizationParams::stabilized(k, gamma_s_im, gamma_j_im)
                        : StabilizationParams::unstabilized(k);
}

RunConfig parse_run_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("surface")) {
      const auto& s = j.at("surface");
      auto one = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      cfg.surfaces.clear();
      if (s.is_array()) {
        for (const auto& v : s) cfg.surfaces.push_back(one(v));
      } else {
        cfg.surfaces.push_back(one(s));
      }
    }
    auto int_list = [](const nlohmann::json& v) {
      if (v.is_string()) return parse_cells(v.get<std::string>());
      if (v.is_number_integer()) return std::vector<int>{v.get<int>()};
      return v.get<std::vector<int>>();
    };
    if (j.contains("cells")) cfg.cells = int_list(j.at("cells"));
    if (j.contains("poly_cells")) cfg.poly_cells = int_list(j.at("poly_cells"));
    if (j.contains("k2")) {
      const auto& v = j.at("k2");
      if (v.is_string()) {
        cfg.k2 = parse_k2(v.get<std::string>());
      } else if (v.is_number()) {
        cfg.k2 = {v.get<double>()};
      } else {
        cfg.k2 = v.get<std::vector<double>>();
      }
    }
    if (j.contains("box_half_width")) cfg.box_half_width = j.at("box_half_width").get<double>();
    if (j.contains("gamma_s_im")) cfg.gamma_s_im = j.at("gamma_s_im").get<double>();
    if (j.contains("gamma_j_im")) cfg.gamma_j_im = j.at("gamma_j_im").get<double>();
    if (j.contains("stabilization")) cfg.stabilized = j.at("stabilization").get<bool>();
    if (j.contains("solution")) cfg.solution = j.at("solution").get<std::string>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("plot")) cfg.plot = j.at("plot").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Discretization::Discretization(const LevelSetSurface& surface, const Box& box, int cells_per_axis)
    : surface_(surface),
      mesh_(std::make_unique<BackgroundMesh>(build_background_mesh(box, cells_per_axis))),
      level_set_(std::make_unique<NodalLevelSet>(interpolate_level_set(*mesh_, surface_))),
      active_(extract_active_mesh(*level_set_)),
      cells_(cut_active_mesh(active_, *level_set_)),
      components_(assemble_components(active_, cells_)) {}

SolveSummary solve_manufactured(const Discretization& disc, const AmbientScalarField& u, double k2,
                                const StabilizationParams& params) {
  const ManufacturedCase mms{u, disc.surface(), k2};
  const SurfaceFunction f = mms.forcing_function();
  const RealVector load = assemble_load(disc.active(), disc.cells(), f, disc.surface());
  const ComplexSparseSystem system = combine(disc.components(), load, params);
  SolveResult result = solve(system);

  SolveSummary s;
  s.cells_per_axis = disc.mesh().cells_per_axis();
  s.h = disc.h();
  s.ndof = disc.active().num_dofs();
  s.k2 = k2;
  s.stabilized = params.is_stabilized();
  s.relative_residual = result.relative_residual;
  s.errors = error_norms(result.solution, mms, disc.active(), disc.cells());
  s.uh_norm = mass_norm(disc.components().mass, result.solution);
  s.f_norm = extended_l2_norm(f, disc.surface(), disc.cells());
  const double hk = s.h * params.k;
  s.stability_bound = params.is_stabilized()
                          ? (1.0 / params.gamma_s.imag()) * (1.0 / (hk * hk) + 1.0) * s.f_norm
                          : std::numeric_limits<double>::infinity();
  s.solution = std::move(result.solution);
  return s;
}

SolveSummary run_solve(const RunConfig& cfg) {
  cfg.validate();
  const LevelSetSurface surface = surface_from_argument(cfg.surfaces.front());
  const Box box = cfg.box_half_width ? Box::cube(*cfg.box_half_width) : default_box(surface);
  const Discretization disc(surface, box, cfg.cells.front());
  const double k2 = cfg.k2.front();
  return solve_manufactured(disc, AmbientScalarField::preset(cfg.solution), k2, cfg.params(k2, cfg.stabilized));
}

namespace {

std::vector<ConvergenceRecord> convergence_on(const LevelSetSurface& surface, const Box& box,
                                              const std::vector<int>& cells, const RunConfig& cfg,
                                              std::vector<std::vector<SolveSummary>>* runs) {
  const AmbientScalarField u = AmbientScalarField::preset(cfg.solution);
  std::vector<ConvergenceRecord> records(cfg.k2.size());
  if (runs) runs->assign(cfg.k2.size(), {});
  for (int n : cells) {
    const Discretization disc(surface, box, n);
    for (std::size_t i = 0; i < cfg.k2.size(); ++i) {
      SolveSummary s = solve_manufactured(disc, u, cfg.k2[i], cfg.params(cfg.k2[i], cfg.stabilized));
      records[i].add({s.h, s.ndof, s.errors});
      if (runs) {
        s.solution.resize(0);
        (*runs)[i].push_back(std::move(s));
      }
    }
  }
  return records;
}

}  // namespace

std::vector<ConvergenceRecord> run_convergence(const RunConfig& cfg,
                                               std::vector<std::vector<SolveSummary>>* runs) {
  cfg.validate();
  if (cfg.cells.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "convergence needs at least three refinements");
  }
  const LevelSetSurface surface = surface_from_argument(cfg.surfaces.front());
  const Box box = cfg.box_half_width ? Box::cube(*cfg.box_half_width) : default_box(surface);
  auto records = convergence_on(surface, box, cfg.cells, cfg, runs);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> labels;
    std::vector<std::filesystem::path> paths;
    nlohmann::json meta;
    meta["surface"] = cfg.surfaces.front();
    meta["cells"] = cfg.cells;
    meta["k2"] = cfg.k2;
    meta["k2_note"] = "wave numbers are a run choice; the default set {1,4,16} is not taken from published data";
    meta["gamma_s_im"] = cfg.stabilized ? cfg.gamma_s_im : 0.0;
    meta["gamma_j_im"] = cfg.stabilized ? cfg.gamma_j_im : 0.0;
    meta["solution"] = cfg.solution;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto path = cfg.out_dir / ("convergence_k2_" + format_number(cfg.k2[i]) + ".csv");
      write_text(path, convergence_csv(records[i]));
      labels.push_back("k2=" + format_number(cfg.k2[i]));
      paths.push_back(path);
      const RateSlopes slopes = fit_rates(records[i]);
      meta["slopes"].push_back({{"k2", cfg.k2[i]}, {"l2", slopes.l2}, {"h1t", slopes.h1t}, {"energy", slopes.energy}});
    }
    write_text(cfg.out_dir / "convergence.meta.json", meta.dump(2) + "\n");
    if (cfg.plot) {
      std::vector<CsvTable> tables;
      for (const auto& p : paths) tables.push_back(parse_csv(read_text(p)));
      write_text(cfg.out_dir / "convergence.svg", plot_convergence_svg(labels, tables));
    }
  }
  return records;
}

void write_eigen_scan_csv(const std::vector<EigenScanRow>& rows, std::ostream& os) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "k2,err_stab,err_unstab\n";
  for (const auto& r : rows) os << r.k2 << ',' << r.err_stab << ',' << r.err_unstab << '\n';
  os.precision(old_precision);
}

std::vector<EigenScanRow> run_eigen_scan(const RunConfig& cfg, std::vector<SolveSummary>* stabilized_runs) {
  cfg.validate();
  const LevelSetSurface surface = surface_from_argument(cfg.surfaces.front());
  const Box box = cfg.box_half_width ? Box::cube(*cfg.box_half_width) : default_box(surface);
  const Discretization disc(surface, box, cfg.cells.front());
  const AmbientScalarField u = AmbientScalarField::preset(cfg.solution);

  std::vector<EigenScanRow> rows;
  rows.reserve(cfg.k2.size());
  for (double k2 : cfg.k2) {
    EigenScanRow row;
    row.k2 = k2;
    SolveSummary stab = solve_manufactured(disc, u, k2, cfg.params(k2, true));
    row.err_stab = stab.errors.l2;
    try {
      row.err_unstab = solve_manufactured(disc, u, k2, cfg.params(k2, false)).errors.l2;
    } catch (const Error& e) {
      if (category(e.kind()) != ErrorCategory::Solver) throw;
      row.err_unstab = std::numeric_limits<double>::infinity();
    }
    rows.push_back(row);
    if (stabilized_runs) {
      stab.solution.resize(0);
      stabilized_runs->push_back(std::move(stab));
    }
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ostringstream csv;
    write_eigen_scan_csv(rows, csv);
    write_text(cfg.out_dir / "eigen_scan.csv", csv.str());
    nlohmann::json meta;
    meta["surface"] = cfg.surfaces.front();
    meta["cells"] = cfg.cells.front();
    meta["k2_grid"] = {{"first", cfg.k2.front()}, {"last", cfg.k2.back()}, {"count", cfg.k2.size()}};
    meta["plot_cap_factor"] = 1e3;
    meta["note"] = "scan grid and plot cap are run choices; raw errors are kept unclipped in the CSV";
    write_text(cfg.out_dir / "eigen_scan.meta.json", meta.dump(2) + "\n");
    if (cfg.plot) {
      write_text(cfg.out_dir / "eigen_scan.svg",
                 plot_eigen_scan_svg(parse_csv(read_text(cfg.out_dir / "eigen_scan.csv"))));
    }
  }
  return rows;
}

std::vector<GeometrySweepResult> run_geometry_sweep(const RunConfig& cfg) {
  cfg.validate();
  RunConfig single = cfg;
  single.k2 = {cfg.k2.front()};
  std::vector<GeometrySweepResult> results;
  std::vector<std::string> labels;
  std::vector<CsvTable> tables;
  for (const auto& arg : cfg.surfaces) {
    const LevelSetSurface surface = surface_from_argument(arg);
    const bool poly = std::holds_alternative<PolyIsoline>(surface.shape());
    const auto& cells = poly ? cfg.poly_cells : cfg.cells;
    if (cells.size() < 3) {
      throw Error(ErrorKind::InsufficientData, "geometry sweep needs at least three refinements");
    }
    const Box box = cfg.box_half_width ? Box::cube(*cfg.box_half_width) : default_box(surface);
    auto records = convergence_on(surface, box, cells, single, nullptr);
    GeometrySweepResult r{arg, std::move(records.front()), {}};
    r.slopes = fit_rates(r.record);
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = cfg.out_dir / ("geometry_" + label_for(arg) + ".csv");
      write_text(path, convergence_csv(r.record));
      labels.push_back(label_for(arg));
      tables.push_back(parse_csv(read_text(path)));
    }
    results.push_back(std::move(r));
  }
  if (!cfg.out_dir.empty()) {
    nlohmann::json meta;
    meta["k2"] = cfg.k2.front();
    meta["cells"] = cfg.cells;
    meta["poly_cells"] = cfg.poly_cells;
    for (const auto& r : results) {
      meta["slopes"].push_back({{"surface", r.surface}, {"l2", r.slopes.l2}, {"h1t", r.slopes.h1t},
                                {"energy", r.slopes.energy}});
    }
    write_text(cfg.out_dir / "geometry_sweep.meta.json", meta.dump(2) + "\n");
    if (cfg.plot) write_text(cfg.out_dir / "geometry_sweep.svg", plot_convergence_svg(labels, tables));
  }
  return results;
}

}  // namespace surfhelm
