#include "surfhelm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "surfhelm/errors.hpp"

namespace surfhelm {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double pix_lo, double pix_hi) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return pix_lo + (x - a) / (b - a) * (pix_hi - pix_lo);
  }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = 1.0, hi = 10.0;
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else if (hi <= lo) {
    hi = lo + 1.0;
  }
  return {lo, hi, log};
}

class Canvas {
 public:
  Canvas(Axis x, Axis y, std::string xlabel, std::string ylabel) : x_(x), y_(y) {
    os_.precision(6);
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os_ << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
        << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    ticks();
    os_ << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    os_ << "<text x=\"20\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (kTop + kHeight - kBottom) / 2 << ")\">" << ylabel << "</text>\n";
  }

  double px(double v) const { return x_.map(v, kLeft, kWidth - kRight); }
  double py(double v) const { return y_.map(v, kHeight - kBottom, kTop); }

  void series(const std::vector<double>& xs, const std::vector<double>& ys, const char* color,
              const std::string& dash = "") {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (!dash.empty()) os_ << " stroke-dasharray=\"" << dash << "\"";
    os_ << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) os_ << px(xs[i]) << ',' << py(ys[i]) << ' ';
    os_ << "\"/>\n";
    if (dash.empty()) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        os_ << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
  }

  void legend(int slot, const std::string& label, const char* color, const std::string& dash = "") {
    const double y = kTop + 15 + 18 * slot;
    const double x = kWidth - kRight + 10;
    os_ << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 25 << "\" y2=\"" << y << "\" stroke=\""
        << color << "\" stroke-width=\"1.5\"";
    if (!dash.empty()) os_ << " stroke-dasharray=\"" << dash << "\"";
    os_ << "/>\n<text x=\"" << x + 30 << "\" y=\"" << y + 4 << "\">" << label << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  void ticks() {
    auto tick_values = [](const Axis& a) {
      std::vector<double> t;
      if (a.log) {
        for (double v = a.lo; v <= a.hi * 1.0001; v *= 10.0) t.push_back(v);
      } else {
        for (int i = 0; i <= 5; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 5.0);
      }
      return t;
    };
    for (double v : tick_values(x_)) {
      os_ << "<text x=\"" << px(v) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">" << v
          << "</text>\n";
    }
    for (double v : tick_values(y_)) {
      os_ << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
    }
  }

  Axis x_, y_;
  std::ostringstream os_;
};

}  // namespace

std::vector<double> CsvTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw Error(ErrorKind::InvalidConfig, "CSV column '" + std::string(name) + "' missing");
  }
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(idx));
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream is{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (header) {
      table.columns = fields;
      header = false;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw Error(ErrorKind::InvalidConfig, "CSV row width differs from header");
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      if (f == "inf") {
        row.push_back(std::numeric_limits<double>::infinity());
      } else {
        try {
          row.push_back(std::stod(f));
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidConfig, "CSV field '" + f + "' is not numeric");
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string plot_convergence_svg(const std::vector<std::string>& labels, const std::vector<CsvTable>& tables) {
  std::vector<double> all_h, all_e;
  for (const auto& t : tables) {
    const auto h = t.column("h");
    const auto e = t.column("err_l2");
    all_h.insert(all_h.end(), h.begin(), h.end());
    all_e.insert(all_e.end(), e.begin(), e.end());
  }
  // Reference line h² through the finest point of the first series.
  std::vector<double> ref_h, ref_e;
  if (!tables.empty() && !tables.front().rows.empty()) {
    const auto h = tables.front().column("h");
    const auto e = tables.front().column("err_l2");
    const double scale = 0.5 * e.back() / (h.back() * h.back());
    ref_h = {h.front(), h.back()};
    ref_e = {scale * h.front() * h.front(), scale * h.back() * h.back()};
    all_e.insert(all_e.end(), ref_e.begin(), ref_e.end());
  }
  Canvas canvas(fit_axis(all_h, true), fit_axis(all_e, true), "h", "L2 error");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    canvas.series(tables[i].column("h"), tables[i].column("err_l2"), color);
    canvas.legend(static_cast<int>(i), i < labels.size() ? labels[i] : "", color);
  }
  if (!ref_h.empty()) {
    canvas.series(ref_h, ref_e, "black", "2,4");
    canvas.legend(static_cast<int>(tables.size()), "slope 2", "black", "2,4");
  }
  return canvas.finish();
}

std::string plot_eigen_scan_svg(const CsvTable& table, double cap_factor) {
  const auto k2 = table.column("k2");
  auto stab = table.column("err_stab");
  auto unstab = table.column("err_unstab");
  double baseline = std::numeric_limits<double>::infinity();
  for (const auto* col : {&stab, &unstab}) {
    for (double v : *col) {
      if (std::isfinite(v) && v > 0.0) baseline = std::min(baseline, v);
    }
  }
  const double cap = std::isfinite(baseline) ? cap_factor * baseline : std::numeric_limits<double>::max();
  for (auto* col : {&stab, &unstab}) {
    for (double& v : *col) v = std::min(v, cap);
  }
  std::vector<double> all = stab;
  all.insert(all.end(), unstab.begin(), unstab.end());
  Canvas canvas(fit_axis(k2, false), fit_axis(all, true), "k^2", "L2 error");
  canvas.series(k2, stab, kColors[0]);
  canvas.legend(0, "stabilized", kColors[0]);
  canvas.series(k2, unstab, kColors[1]);
  canvas.legend(1, "unstabilized", kColors[1]);
  return canvas.finish();
}

}  // namespace surfhelm
