#include "qnepb/initial.hpp"

#include <string>

namespace qnepb {

PrimalField equilibrium_potential(const PrimalField& rho, const MacMesh& mesh, double eps, const VariableBc& bc,
                                  const PbTolerances& tol, const PrimalField& phi_init) {
  EllipticProblem problem{mesh, mesh.face_field(eps * eps), rho, bc, tol};
  return solve_pb(problem, phi_init).phi;
}

State project_initial(const InitialData& data, const MacMesh& mesh, const SchemeConfig& cfg) {
  if (!data.rho) throw InputError("initial data needs a density");
  State s;
  s.rho = mesh.cell_field();
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const double x = mesh.cell_center(0, k);
    const double y = mesh.dimension() == 2 ? mesh.cell_center(1, k) : 0.0;
    s.rho[k] = data.rho(x, y);
    if (!(s.rho[k] > 0.0)) throw InputError("projected initial density is non-positive at cell " + std::to_string(k));
  }
  s.u = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    if (!data.u[axis]) continue;
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const double x = mesh.face_center(axis, f, 0);
      const double y = mesh.dimension() == 2 ? mesh.face_center(axis, f, 1) : 0.0;
      s.u[axis][f] = data.u[axis](x, y);
    }
  }
  apply_velocity_bc(s.u, mesh, cfg.bc.velocity);
  if (data.phi) {
    s.phi = mesh.cell_field();
    for (int k = 0; k < mesh.num_cells(); ++k)
      s.phi[k] = data.phi(mesh.cell_center(0, k), mesh.dimension() == 2 ? mesh.cell_center(1, k) : 0.0);
  } else {
    s.phi = equilibrium_potential(s.rho, mesh, cfg.eps, cfg.bc.potential, cfg.tol);
  }
  return s;
}

}  // namespace qnepb
