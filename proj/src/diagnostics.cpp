#include "qnepb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qnepb/io.hpp"

namespace qnepb {

EnergyBreakdown total_energy(const State& s, const MacMesh& mesh, double eps, const VariableBc& potential_bc) {
  EnergyBreakdown e;
  const FaceField rho_dual = dual_average(s.rho, mesh);
  const FaceField g = gradient(s.phi, mesh, potential_bc);
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    const bool periodic = potential_bc.periodic_on(axis);
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      if (!mesh.is_boundary(axis, f)) {
        const double u = s.u[axis][f];
        e.kinetic += 0.5 * mesh.dual_volume(axis, f) * rho_dual[axis][f] * u * u;
        e.field += mesh.dual_volume(axis, f) * g[axis][f] * g[axis][f];
      } else if (periodic && mesh.face_pos(axis, f) == 0) {
        e.field += mesh.wrap_dual_volume(axis, mesh.face_line(axis, f)) * g[axis][f] * g[axis][f];
      }
    }
  }
  e.field *= 0.5 * eps * eps;
  for (int k = 0; k < mesh.num_cells(); ++k) e.boltzmann += mesh.volume(k) * std::exp(s.phi[k]) * (s.phi[k] - 1.0);
  e.total = e.kinetic + e.boltzmann + e.field;
  return e;
}

double total_mass(const PrimalField& rho, const MacMesh& mesh) {
  double m = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) m += mesh.volume(k) * rho[k];
  return m;
}

double min_value(const PrimalField& q) {
  return q.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::min_element(q.begin(), q.end());
}

double quasineutrality_residual(const State& s) {
  double r = 0.0;
  for (std::size_t k = 0; k < s.rho.size(); ++k) r = std::max(r, std::abs(s.rho[k] - std::exp(s.phi[k])));
  return r;
}

PrimalField potential_remainder(const PrimalField& phi_n, const PrimalField& phi_np1, const MacMesh& mesh, double eps,
                                double dt) {
  PrimalField r = mesh.cell_field();
  for (int k = 0; k < mesh.num_cells(); ++k)
    r[k] = mesh.volume(k) / dt * (std::exp(phi_np1[k]) * (phi_np1[k] - phi_n[k] - 1.0) + std::exp(phi_n[k]));
  const FaceField gn = gradient(phi_n, mesh), gnp1 = gradient(phi_np1, mesh);
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      if (mesh.is_boundary(axis, f)) continue;
      const double d = gnp1[axis][f] - gn[axis][f];
      const double term = eps * eps / (4.0 * dt) * mesh.dual_volume(axis, f) * d * d;
      r[mesh.minus_cell(axis, f)] += term;
      r[mesh.plus_cell(axis, f)] += term;
    }
  return r;
}

double sheath_edge(const std::vector<double>& x, const PrimalField& rho, double plateau) {
  if (x.size() != rho.size() || x.empty()) throw InputError("sheath_edge: profile size mismatch");
  if (!(plateau > 0.0)) throw InputError("sheath_edge: plateau density must be positive");
  const double half = 0.5 * plateau;
  for (std::size_t i = rho.size(); i-- > 0;) {
    if (rho[i] < half) continue;
    if (i + 1 == rho.size()) return x[i];
    const double w = (rho[i] - half) / (rho[i] - rho[i + 1]);
    return x[i] + w * (x[i + 1] - x[i]);
  }
  throw InputError("sheath_edge: density never reaches half the plateau value");
}

double l1_difference(const PrimalField& a, const PrimalField& b, const MacMesh& mesh) {
  if (a.size() != b.size()) throw InputError("l1_difference: size mismatch");
  double s = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) s += mesh.volume(k) * std::abs(a[k] - b[k]);
  return s;
}

double l1_norm(const PrimalField& a, const MacMesh& mesh) {
  double s = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) s += mesh.volume(k) * std::abs(a[k]);
  return s;
}

DiagRecord make_record(const State& s, double dt, const MacMesh& mesh, double eps, const VariableBc& potential_bc) {
  DiagRecord r;
  r.t = s.t;
  r.dt = dt;
  r.mass = total_mass(s.rho, mesh);
  r.min_rho = min_value(s.rho);
  r.energy = total_energy(s, mesh, eps, potential_bc);
  r.qn_residual = quasineutrality_residual(s);
  return r;
}

void DiagSeries::append(const DiagRecord& r) {
  if (!records_.empty() && !(r.t > records_.back().t))
    throw InputError("diagnostic records must have strictly increasing time stamps");
  records_.push_back(r);
}

void DiagSeries::write_csv(std::ostream& os) const {
  os << kHeader << '\n';
  for (const auto& r : records_) {
    write_row(os, {r.t, r.dt, r.mass, r.min_rho, r.energy.kinetic, r.energy.boltzmann, r.energy.field, r.energy.total,
                   r.qn_residual});
  }
}

}  // namespace qnepb
