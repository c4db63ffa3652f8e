#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace snmge {

/// Command-line overrides layered on top of the problem file; unset
/// optionals leave the file's (or default) value alone. depth and pc_sn keep
/// their textual forms because "auto" and "same" are valid.
struct CliOverrides {
  std::optional<bool> eigen;
  std::optional<bool> precond;
  std::optional<double> weight;
  std::optional<int> relax;
  std::optional<int> vcycles;
  std::optional<std::string> depth;   // "auto" | integer
  std::optional<std::string> pc_sn;   // "same" | integer
  std::optional<int> sets;
  std::optional<std::string> solver;  // "gmres" | "gs"
  std::optional<double> tol;
};

struct DriverOptions {
  std::string problem_path;
  std::string out_dir;  // empty: print the summary but write no files
  CliOverrides overrides;
};

/// Loads the problem, applies overrides, validates, solves, and writes
/// convergence.csv, flux.csv, and manifest.json into out_dir when given.
/// Returns the process exit code: 0 converged, 2 iteration cap or numerical
/// failure, 1 configuration or input error.
int run_driver(const DriverOptions& options, std::ostream& out, std::ostream& err);

}  // namespace snmge
