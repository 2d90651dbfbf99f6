#include "qnepb/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace qnepb {

std::string to_string(BcKind k) {
  switch (k) {
    case BcKind::neumann_zero: return "neumann_zero";
    case BcKind::dirichlet: return "dirichlet";
    case BcKind::periodic: return "periodic";
    case BcKind::extrapolate: return "extrapolate_zero_order";
    case BcKind::no_slip: return "no_slip";
  }
  return "?";
}

BcKind bc_kind_from_string(const std::string& s) {
  if (s == "neumann_zero") return BcKind::neumann_zero;
  if (s == "dirichlet") return BcKind::dirichlet;
  if (s == "periodic") return BcKind::periodic;
  if (s == "extrapolate_zero_order" || s == "extrapolate") return BcKind::extrapolate;
  if (s == "no_slip") return BcKind::no_slip;
  throw InputError("unknown boundary condition kind '" + s + "'");
}

bool VariableBc::has_dirichlet() const {
  return std::any_of(side.begin(), side.end(), [](const SideBc& b) { return b.kind == BcKind::dirichlet; });
}

bool VariableBc::periodic_on(int axis) const { return side[2 * axis].kind == BcKind::periodic; }

VariableBc VariableBc::all(BcKind k, double value) {
  VariableBc v;
  for (auto& s : v.side) s = SideBc{k, value};
  return v;
}

void BoundarySpec::validate(int dimension) const {
  auto check = [&](const VariableBc& v, const char* name, bool allow_periodic) {
    for (int axis = 0; axis < dimension; ++axis) {
      const bool lo = v.side[2 * axis].kind == BcKind::periodic;
      const bool hi = v.side[2 * axis + 1].kind == BcKind::periodic;
      if (lo != hi)
        throw InputError(std::string("periodic ") + name + " condition must be declared on both opposite sides");
      if (lo && !allow_periodic)
        throw InputError(std::string("periodic conditions are only supported for the potential, not ") + name);
    }
  };
  check(density, "density", false);
  check(velocity, "velocity", false);
  check(potential, "potential", true);
}

MacMesh::MacMesh(int dimension, std::vector<double> x_faces, std::vector<double> y_faces) : dim_(dimension) {
  if (dim_ != 1 && dim_ != 2) throw InputError("mesh dimension must be 1 or 2");
  if (dim_ == 1) y_faces = {0.0, 1.0};
  coords_ = {std::move(x_faces), std::move(y_faces)};
  for (int a = 0; a < 2; ++a) {
    const auto& c = coords_[a];
    if (c.size() < 2) throw InputError("each axis needs at least one cell");
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (!(c[i + 1] > c[i])) throw InputError("face coordinates must be strictly increasing");
    n_[a] = static_cast<int>(c.size()) - 1;
  }

  const int nc = num_cells();
  volume_.resize(nc);
  perimeter_.resize(nc);
  for (int j = 0; j < n_[1]; ++j)
    for (int i = 0; i < n_[0]; ++i) {
      const int k = cell(i, j);
      const double dx = width(0, i), dy = width(1, j);
      volume_[k] = dx * dy;
      perimeter_[k] = dim_ == 1 ? 2.0 : 2.0 * (dx + dy);
    }

  for (int axis = 0; axis < dim_; ++axis) {
    const int nf = num_faces(axis);
    area_[axis].resize(nf);
    dual_[axis].resize(nf);
    minus_[axis].resize(nf);
    plus_[axis].resize(nf);
    const int other = 1 - axis;
    for (int line = 0; line < n_[other]; ++line)
      for (int pos = 0; pos <= n_[axis]; ++pos) {
        const int f = face_along(axis, pos, line);
        area_[axis][f] = dim_ == 1 ? 1.0 : width(other, line);
        auto cell_at = [&](int p) { return axis == 0 ? cell(p, line) : cell(line, p); };
        minus_[axis][f] = pos > 0 ? cell_at(pos - 1) : -1;
        plus_[axis][f] = pos < n_[axis] ? cell_at(pos) : -1;
        double d = 0.0;
        if (minus_[axis][f] >= 0) d += half_volume(minus_[axis][f]);
        if (plus_[axis][f] >= 0) d += half_volume(plus_[axis][f]);
        dual_[axis][f] = d;
      }
  }
}

int MacMesh::num_faces(int axis) const {
  if (axis >= dim_) return 0;
  return axis == 0 ? (n_[0] + 1) * n_[1] : n_[0] * (n_[1] + 1);
}

int MacMesh::face(int axis, int i, int j) const { return axis == 0 ? i + (n_[0] + 1) * j : i + n_[0] * j; }

int MacMesh::face_along(int axis, int pos, int line) const {
  return axis == 0 ? face(0, pos, line) : face(1, line, pos);
}

int MacMesh::face_pos(int axis, int f) const { return axis == 0 ? f % (n_[0] + 1) : f / n_[0]; }

int MacMesh::face_line(int axis, int f) const { return axis == 0 ? f / (n_[0] + 1) : f % n_[0]; }

Side MacMesh::boundary_side(int axis, int f) const {
  if (minus_[axis][f] < 0) return axis == 0 ? Side::xmin : Side::ymin;
  if (plus_[axis][f] < 0) return axis == 0 ? Side::xmax : Side::ymax;
  throw std::logic_error("boundary_side called on an interior face");
}

int MacMesh::inner_cell(int axis, int f) const { return minus_[axis][f] >= 0 ? minus_[axis][f] : plus_[axis][f]; }

double MacMesh::face_center(int axis, int f, int comp) const {
  if (comp == axis) return coords_[axis][face_pos(axis, f)];
  return center(comp, face_line(axis, f));
}

double MacMesh::wrap_dual_volume(int axis, int line) const {
  const int first = axis == 0 ? cell(0, line) : cell(line, 0);
  const int last = axis == 0 ? cell(n_[0] - 1, line) : cell(line, n_[1] - 1);
  return half_volume(first) + half_volume(last);
}

double MacMesh::domain_measure() const {
  double s = 0.0;
  for (double v : volume_) s += v;
  return s;
}

double MacMesh::max_diameter_ratio() const {
  double r = 0.0;
  for (int k = 0; k < num_cells(); ++k) {
    const double dx = width(0, cell_i(k));
    const double dy = dim_ == 2 ? width(1, cell_j(k)) : 0.0;
    const double diam2 = dx * dx + dy * dy;
    // in 1D |K| is a length, so compare diam^2/|K| with the 1D measure
    r = std::max(r, diam2 / volume_[k]);
  }
  return r;
}

double MacMesh::max_dual_ratio() const {
  double r = 0.0;
  for (int axis = 0; axis < dim_; ++axis)
    for (int f = 0; f < num_faces(axis); ++f)
      for (int k : {minus_[axis][f], plus_[axis][f]})
        if (k >= 0) r = std::max(r, dual_[axis][f] / volume_[k]);
  return r;
}

FaceField MacMesh::face_field(double value) const {
  FaceField ff;
  for (int a = 0; a < dim_; ++a) ff[a].assign(num_faces(a), value);
  return ff;
}

MacMesh build_mesh(int dimension, const DomainBounds& bounds, std::array<int, 2> cells, Grading) {
  if (dimension != 1 && dimension != 2) throw InputError("mesh dimension must be 1 or 2");
  std::array<std::vector<double>, 2> faces;
  for (int a = 0; a < dimension; ++a) {
    if (cells[a] < 2) throw InputError("at least 2 cells per axis are required");
    if (!(bounds.hi[a] > bounds.lo[a])) throw InputError("domain bounds are inverted or empty");
    const double h = (bounds.hi[a] - bounds.lo[a]) / cells[a];
    faces[a].resize(cells[a] + 1);
    for (int i = 0; i <= cells[a]; ++i) faces[a][i] = bounds.lo[a] + i * h;
    faces[a].back() = bounds.hi[a];
  }
  return MacMesh(dimension, std::move(faces[0]), std::move(faces[1]));
}

MacMesh build_mesh(std::vector<double> x_faces, std::vector<double> y_faces) {
  const int dim = y_faces.empty() ? 1 : 2;
  if (x_faces.size() < 3 || (dim == 2 && y_faces.size() < 3))
    throw InputError("at least 2 cells per axis are required");
  return MacMesh(dim, std::move(x_faces), std::move(y_faces));
}

FaceField dual_average(const PrimalField& rho, const MacMesh& mesh) {
  if (static_cast<int>(rho.size()) != mesh.num_cells()) throw InputError("dual_average: field size mismatch");
  FaceField out = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km < 0 || kp < 0) {
        out[axis][f] = rho[km < 0 ? kp : km];
        continue;
      }
      out[axis][f] = (mesh.half_volume(km) * rho[km] + mesh.half_volume(kp) * rho[kp]) / mesh.dual_volume(axis, f);
    }
  return out;
}

}  // namespace qnepb
