#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnepb {

/// Raised for malformed input (bad mesh parameters, inconsistent BCs, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cell-centred scalar (density, potential, source terms). One value per primal cell.
using PrimalField = std::vector<double>;

/// Face-normal quantities, one array per axis family E^(i).
/// Values are the component along +e^(i); outward signs are applied at use sites.
struct FaceField {
  std::array<std::vector<double>, 2> comp;

  std::vector<double>& operator[](int axis) { return comp[axis]; }
  const std::vector<double>& operator[](int axis) const { return comp[axis]; }
};

enum class Side { xmin = 0, xmax = 1, ymin = 2, ymax = 3 };

inline int side_axis(Side s) { return static_cast<int>(s) / 2; }
inline bool side_is_max(Side s) { return static_cast<int>(s) % 2 == 1; }

enum class BcKind { neumann_zero, dirichlet, periodic, extrapolate, no_slip };

std::string to_string(BcKind k);
BcKind bc_kind_from_string(const std::string& s);

struct SideBc {
  BcKind kind = BcKind::neumann_zero;
  double value = 0.0;

  bool operator==(const SideBc&) const = default;
};

/// Boundary conditions of one variable on the four sides (ymin/ymax unused in 1D).
struct VariableBc {
  std::array<SideBc, 4> side{};

  const SideBc& operator[](Side s) const { return side[static_cast<int>(s)]; }
  SideBc& operator[](Side s) { return side[static_cast<int>(s)]; }

  bool has_dirichlet() const;
  bool periodic_on(int axis) const;
  bool operator==(const VariableBc&) const = default;

  static VariableBc all(BcKind k, double value = 0.0);
};

struct BoundarySpec {
  VariableBc density;
  VariableBc velocity;
  VariableBc potential;

  /// Periodic pairing per axis; periodic is only supported for the potential.
  void validate(int dimension) const;
  bool operator==(const BoundarySpec&) const = default;
};

/// Staggered Cartesian grid. In 1D the y-extent is a unit slab with one cell row,
/// so face measures are 1 and cell volumes are the interval lengths.
///
/// Cells are numbered k = i + nx*j. x-faces are numbered i + (nx+1)*j (i in [0,nx]),
/// y-faces i + nx*j (j in [0,ny]). For a face, `minus` is the cell on its -e side and
/// `plus` the cell on its +e side; -1 marks the outside of the domain.
class MacMesh {
 public:
  MacMesh(int dimension, std::vector<double> x_faces, std::vector<double> y_faces);

  int dimension() const { return dim_; }
  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int cells(int axis) const { return n_[axis]; }
  int num_cells() const { return n_[0] * n_[1]; }
  int num_faces(int axis) const;

  int cell(int i, int j) const { return i + n_[0] * j; }
  int cell_i(int k) const { return k % n_[0]; }
  int cell_j(int k) const { return k / n_[0]; }

  int face(int axis, int i, int j) const;
  /// Index of the face along `axis` at position `pos` (0..n_axis) in the line through cell `line`.
  int face_along(int axis, int pos, int line) const;
  /// Position of the face along its own axis (0..n_axis) and the index of its line.
  int face_pos(int axis, int f) const;
  int face_line(int axis, int f) const;

  const std::vector<double>& coords(int axis) const { return coords_[axis]; }
  double center(int axis, int idx) const { return 0.5 * (coords_[axis][idx] + coords_[axis][idx + 1]); }
  double width(int axis, int idx) const { return coords_[axis][idx + 1] - coords_[axis][idx]; }
  double cell_center(int axis, int k) const { return center(axis, axis == 0 ? cell_i(k) : cell_j(k)); }

  double volume(int k) const { return volume_[k]; }
  double perimeter(int k) const { return perimeter_[k]; }
  double face_area(int axis, int f) const { return area_[axis][f]; }
  double dual_volume(int axis, int f) const { return dual_[axis][f]; }
  /// |D_{sigma,K}|: the half of cell K adjacent to the face.
  double half_volume(int k) const { return 0.5 * volume_[k]; }
  int minus_cell(int axis, int f) const { return minus_[axis][f]; }
  int plus_cell(int axis, int f) const { return plus_[axis][f]; }
  bool is_boundary(int axis, int f) const { return minus_[axis][f] < 0 || plus_[axis][f] < 0; }
  /// The side a boundary face lies on.
  Side boundary_side(int axis, int f) const;
  /// Cell inside the domain adjacent to a boundary face.
  int inner_cell(int axis, int f) const;
  /// Face coordinate along its axis and the centre of its transverse extent.
  double face_center(int axis, int f, int comp) const;

  /// Dual volume of a periodic wrap face joining the first and last cell of a line.
  double wrap_dual_volume(int axis, int line) const;

  double domain_measure() const;
  /// Max over cells of diam(K)^2/|K|.
  double max_diameter_ratio() const;
  /// Max over faces of |D_sigma|/|K| for the adjacent cells.
  double max_dual_ratio() const;

  PrimalField cell_field(double value = 0.0) const { return PrimalField(num_cells(), value); }
  FaceField face_field(double value = 0.0) const;

 private:
  int dim_;
  std::array<int, 2> n_{};
  std::array<std::vector<double>, 2> coords_;
  std::vector<double> volume_;
  std::vector<double> perimeter_;
  std::array<std::vector<double>, 2> area_;
  std::array<std::vector<double>, 2> dual_;
  std::array<std::vector<int>, 2> minus_;
  std::array<std::vector<int>, 2> plus_;
};

enum class Grading { uniform };

struct DomainBounds {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  bool operator==(const DomainBounds&) const = default;
};

/// Uniform grid on [lo,hi] (1D uses only the x entries).
MacMesh build_mesh(int dimension, const DomainBounds& bounds, std::array<int, 2> cells,
                   Grading grading = Grading::uniform);

/// Grid from explicit, strictly increasing face coordinates (non-uniform spacing).
MacMesh build_mesh(std::vector<double> x_faces, std::vector<double> y_faces = {});

/// |D_sigma| rho_D = |D_{sigma,K}| rho_K + |D_{sigma,L}| rho_L on interior faces;
/// external faces carry the adjacent cell value.
FaceField dual_average(const PrimalField& rho, const MacMesh& mesh);

}  // namespace qnepb
