#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnepb/bench.hpp"
#include "qnepb/diagnostics.hpp"
#include "qnepb/io.hpp"
#include "qnepb/refschemes.hpp"

namespace qnepb {

enum class SchemeKind { ap, rusanov, ice };

std::string to_string(SchemeKind s);
SchemeKind scheme_from_string(const std::string& s);

struct RunConfig {
  CaseSpec spec;
  SchemeKind scheme = SchemeKind::ap;
  std::string out_dir;          // empty: keep results in memory only
  std::string format = "auto";  // csv | vtk | auto (csv in 1D, vtk in 2D)
  PbTolerances tol{};
  double dt_max = std::numeric_limits<double>::infinity();
};

struct RunResult {
  explicit RunResult(MacMesh m) : mesh(std::move(m)) {}

  bool ok = true;
  std::string error;
  int steps = 0;
  MacMesh mesh;
  /// Final staggered state; for the limit scheme phi = ln rho, for the collocated scheme
  /// face velocities are averaged from the cells.
  State state;
  std::optional<CollocatedState> collocated;
  DiagSeries series;
  double max_mass_drift = 0.0;  // relative, boundary outflow accounted for
  double min_rho = std::numeric_limits<double>::infinity();
  int density_ratio_warnings = 0;
  int retries = 0;
  std::vector<std::string> files;
};

/// Time loop with dt clipped to land on snapshot times and t_final.
RunResult run(const RunConfig& cfg);

/// Cell-centred profile (x, rho, u, phi) of a result, from whichever scheme produced it.
CsvTable result_table_1d(const RunResult& r);

/// Staggered state equivalent of a collocated one (face velocities averaged, BC applied).
State to_staggered(const CollocatedState& c, const MacMesh& mesh, const VariableBc& velocity_bc);

}  // namespace qnepb
