#include "qnepb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qnepb {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
  write_row(os, std::vector<double>(values));
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_double(values[i]);
  }
  os << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InputError("csv: no column named '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

void CsvTable::add_column(const std::string& name, const std::vector<double>& values) {
  if (values.size() != rows.size()) throw InputError("csv: column length mismatch");
  header.push_back(name);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].push_back(values[i]);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& r : table.rows) write_row(os, r);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw InputError("csv: empty input");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = std::min(line.find(',', start), line.size());
      double v = 0.0;
      const auto res = std::from_chars(line.data() + start, line.data() + end, v);
      if (res.ec != std::errc()) throw InputError("csv: malformed number in '" + line + "'");
      row.push_back(v);
      start = end + 1;
    }
    if (row.size() != t.header.size()) throw InputError("csv: row width differs from header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, table);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(is);
}

PrimalField cell_velocity(const FaceField& u, const MacMesh& mesh, int axis) {
  PrimalField out = mesh.cell_field();
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const int i = mesh.cell_i(k), j = mesh.cell_j(k);
    const int lo = axis == 0 ? mesh.face(0, i, j) : mesh.face(1, i, j);
    const int hi = axis == 0 ? mesh.face(0, i + 1, j) : mesh.face(1, i, j + 1);
    out[k] = 0.5 * (u[axis][lo] + u[axis][hi]);
  }
  return out;
}

CsvTable snapshot_table_1d(const State& s, const MacMesh& mesh) {
  CsvTable t;
  t.header = {"x", "rho", "u", "phi"};
  const PrimalField uc = cell_velocity(s.u, mesh, 0);
  for (int k = 0; k < mesh.num_cells(); ++k) t.rows.push_back({mesh.cell_center(0, k), s.rho[k], uc[k], s.phi[k]});
  return t;
}

void write_vtk(std::ostream& os, const State& s, const MacMesh& mesh, const std::string& title) {
  const int nx = mesh.nx(), ny = mesh.ny();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET RECTILINEAR_GRID\n";
  os << "DIMENSIONS " << nx + 1 << ' ' << ny + 1 << " 1\n";
  for (int axis = 0; axis < 2; ++axis) {
    const auto& c = mesh.coords(axis);
    os << (axis == 0 ? "X" : "Y") << "_COORDINATES " << c.size() << " double\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << format_double(c[i]) << (i + 1 == c.size() ? '\n' : ' ');
  }
  os << "Z_COORDINATES 1 double\n0\n";
  os << "CELL_DATA " << mesh.num_cells() << '\n';
  for (const auto& [name, field] : {std::pair{"rho", &s.rho}, std::pair{"phi", &s.phi}}) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *field) os << format_double(v) << '\n';
  }
  os << "POINT_DATA " << (nx + 1) * (ny + 1) << "\nVECTORS velocity double\n";
  const bool two_d = mesh.dimension() == 2;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      // average the face values meeting at the vertex
      double u = 0.0, v = 0.0;
      int nu = 0, nv = 0;
      for (int jj : {j - 1, j})
        if (jj >= 0 && jj < ny) {
          u += s.u[0][mesh.face(0, i, jj)];
          ++nu;
        }
      if (two_d)
        for (int ii : {i - 1, i})
          if (ii >= 0 && ii < nx) {
            v += s.u[1][mesh.face(1, ii, j)];
            ++nv;
          }
      os << format_double(nu ? u / nu : 0.0) << ' ' << format_double(nv ? v / nv : 0.0) << " 0\n";
    }
}

CsvTable axis_cut(const State& s, const MacMesh& mesh, int axis) {
  if (mesh.dimension() != 2) throw InputError("axis_cut needs a 2D mesh");
  const int other = 1 - axis;
  const int n = mesh.cells(other);
  const auto& oc = mesh.coords(other);
  const double mid = 0.5 * (oc.front() + oc.back());
  // central line, or the two lines sharing the central face
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < n; ++l) best = std::min(best, std::abs(mesh.center(other, l) - mid));
  std::vector<int> lines;
  for (int l = 0; l < n; ++l)
    if (std::abs(mesh.center(other, l) - mid) <= best + 1e-12 * (oc.back() - oc.front())) lines.push_back(l);
  const PrimalField uc = cell_velocity(s.u, mesh, axis);
  CsvTable t;
  t.header = {"coord", "rho", "u"};
  for (int p = 0; p < mesh.cells(axis); ++p) {
    double r = 0.0, u = 0.0;
    for (int l : lines) {
      const int k = axis == 0 ? mesh.cell(p, l) : mesh.cell(l, p);
      r += s.rho[k];
      u += uc[k];
    }
    t.rows.push_back({mesh.center(axis, p), r / lines.size(), u / lines.size()});
  }
  return t;
}

CsvTable radial_cut(const State& s, const MacMesh& mesh) {
  const CsvTable cut = axis_cut(s, mesh, 0);
  const auto& xc = mesh.coords(0);
  const double mid = 0.5 * (xc.front() + xc.back());
  CsvTable t;
  t.header = {"r", "rho", "u_r"};
  for (const auto& row : cut.rows)
    if (row[0] >= mid) t.rows.push_back({row[0] - mid, row[1], row[2]});
  return t;
}

}  // namespace qnepb
