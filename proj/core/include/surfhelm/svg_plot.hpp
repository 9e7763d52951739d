#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace surfhelm {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws InvalidConfig if the column is missing.
  std::vector<double> column(std::string_view name) const;
};

/// Parses a numeric CSV with a header row ("inf" accepted).
CsvTable parse_csv(std::string_view text);

/// Log-log plot of err_l2 against h for each convergence CSV, with a
/// dotted 2:1 reference line.
std::string plot_convergence_svg(const std::vector<std::string>& labels,
                                 const std::vector<CsvTable>& tables);

/// Semi-log plot of err_stab and err_unstab against k2. Values above
/// cap_factor × the smallest finite error are clipped to the cap.
std::string plot_eigen_scan_svg(const CsvTable& table, double cap_factor = 1e3);

}  // namespace surfhelm
