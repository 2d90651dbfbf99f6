#include "qnepb/discops.hpp"

#include <algorithm>
#include <cmath>

namespace qnepb {

double log_mean(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("log_mean: densities must be strictly positive");
  const double d = a - b;
  if (std::abs(d) <= kLogMeanSwitch * std::max(a, b)) {
    const double m = 0.5 * (a + b);
    const double t = 0.5 * d / m;
    return m * (1.0 - t * t / 3.0);
  }
  return d / std::log1p(d / b);
}

namespace {

double wrap_gradient(const PrimalField& q, const MacMesh& mesh, int axis, int f) {
  const int line = mesh.face_line(axis, f);
  const int n = mesh.cells(axis);
  const int first = axis == 0 ? mesh.cell(0, line) : mesh.cell(line, 0);
  const int last = axis == 0 ? mesh.cell(n - 1, line) : mesh.cell(line, n - 1);
  return mesh.face_area(axis, f) / mesh.wrap_dual_volume(axis, line) * (q[first] - q[last]);
}

}  // namespace

FaceField gradient(const PrimalField& q, const MacMesh& mesh, const VariableBc& bc) {
  FaceField g = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      const double ratio = mesh.face_area(axis, f) / mesh.dual_volume(axis, f);
      if (km >= 0 && kp >= 0) {
        g[axis][f] = ratio * (q[kp] - q[km]);
        continue;
      }
      const SideBc& b = bc[mesh.boundary_side(axis, f)];
      switch (b.kind) {
        case BcKind::dirichlet:
          g[axis][f] = km < 0 ? ratio * (q[kp] - b.value) : ratio * (b.value - q[km]);
          break;
        case BcKind::periodic:
          g[axis][f] = wrap_gradient(q, mesh, axis, f);
          break;
        default:
          g[axis][f] = 0.0;
      }
    }
  return g;
}

FaceField gradient(const PrimalField& q, const MacMesh& mesh) {
  return gradient(q, mesh, VariableBc::all(BcKind::neumann_zero));
}

PrimalField divergence(const FaceField& v, const MacMesh& mesh) {
  PrimalField div = mesh.cell_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const double flux = mesh.face_area(axis, f) * v[axis][f];
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km >= 0) div[km] += flux;
      if (kp >= 0) div[kp] -= flux;
    }
  for (int k = 0; k < mesh.num_cells(); ++k) div[k] /= mesh.volume(k);
  return div;
}

PrimalField laplacian(const PrimalField& q, const MacMesh& mesh, const VariableBc& bc,
                      const std::optional<FaceField>& coeff) {
  FaceField flux = gradient(q, mesh, bc);
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    const bool periodic = bc.periodic_on(axis);
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const bool boundary = mesh.is_boundary(axis, f);
      const bool carries = !boundary || periodic || bc[mesh.boundary_side(axis, f)].kind == BcKind::dirichlet;
      if (coeff) {
        const double c = (*coeff)[axis][f];
        if (carries && !(c > 0.0)) throw InputError("laplacian: coefficient must be positive");
        flux[axis][f] *= c;
      }
    }
    if (periodic) {
      // the wrap face is shared by both ends of a line; use the coefficient stored at position 0
      for (int line = 0; line < mesh.cells(1 - axis); ++line)
        flux[axis][mesh.face_along(axis, mesh.cells(axis), line)] = flux[axis][mesh.face_along(axis, 0, line)];
    }
  }
  return divergence(flux, mesh);
}

double duality_residual(const PrimalField& q, const FaceField& v, const MacMesh& mesh) {
  FaceField v0 = v;
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      if (mesh.is_boundary(axis, f)) v0[axis][f] = 0.0;
  const PrimalField div = divergence(v0, mesh);
  const FaceField grad = gradient(q, mesh);
  double cell_sum = 0.0, face_sum = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) cell_sum += mesh.volume(k) * q[k] * div[k];
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      face_sum += mesh.dual_volume(axis, f) * grad[axis][f] * v0[axis][f];
  return cell_sum + face_sum;
}

FaceField interface_density(const PrimalField& rho, const MacMesh& mesh) {
  FaceField out = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km < 0 || kp < 0) {
        const double r = rho[km < 0 ? kp : km];
        if (!(r > 0.0)) throw InputError("interface_density: non-positive density");
        out[axis][f] = r;
      } else {
        out[axis][f] = log_mean(rho[km], rho[kp]);
      }
    }
  return out;
}

double face_weight(const MacMesh& mesh, int axis, int f, const VariableBc& bc) {
  const double a = mesh.face_area(axis, f);
  if (!mesh.is_boundary(axis, f)) return a * a / mesh.dual_volume(axis, f);
  const SideBc& b = bc[mesh.boundary_side(axis, f)];
  if (b.kind == BcKind::periodic) return a * a / mesh.wrap_dual_volume(axis, mesh.face_line(axis, f));
  if (b.kind == BcKind::dirichlet) return a * a / mesh.dual_volume(axis, f);
  return 0.0;
}

}  // namespace qnepb
