#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "qnepb/apscheme.hpp"

namespace qnepb {

/// 17 significant digits, round-trip exact.
std::string format_double(double v);
void write_row(std::ostream& os, std::initializer_list<double> values);
void write_row(std::ostream& os, const std::vector<double>& values);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
  void add_column(const std::string& name, const std::vector<double>& values);
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

/// Face velocity along `axis` averaged to cell centres.
PrimalField cell_velocity(const FaceField& u, const MacMesh& mesh, int axis);

/// 1D snapshot: columns x, rho, u, phi.
CsvTable snapshot_table_1d(const State& s, const MacMesh& mesh);

/// Legacy ASCII VTK rectilinear grid: cell data rho, phi; point velocities.
void write_vtk(std::ostream& os, const State& s, const MacMesh& mesh, const std::string& title);

/// Profile through the domain centre along `axis` (average of the two central lines when
/// the centre falls on a face): columns coord, rho, u (velocity component along the cut).
CsvTable axis_cut(const State& s, const MacMesh& mesh, int axis);

/// Half of the x-axis cut starting at the centre: columns r, rho, u_r.
CsvTable radial_cut(const State& s, const MacMesh& mesh);

}  // namespace qnepb
