#include "qnepb/apscheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnepb {

void SchemeConfig::validate(int dimension, bool allow_zero_eps) const {
  if (!(eps > 0.0) && !(allow_zero_eps && eps == 0.0)) throw InputError("eps must be positive");
  if (!(gamma > 1.0)) throw InputError("eta safety factor gamma must exceed 1");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InputError("cfl factor must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw InputError("dt_max must be positive");
  bc.validate(dimension);
}

namespace {

// transverse faces of a cell along axis b
int lower_face(const MacMesh& mesh, int b, int k) {
  return b == 0 ? mesh.face(0, mesh.cell_i(k), mesh.cell_j(k)) : mesh.face(1, mesh.cell_i(k), mesh.cell_j(k));
}
int upper_face(const MacMesh& mesh, int b, int k) {
  return b == 0 ? mesh.face(0, mesh.cell_i(k) + 1, mesh.cell_j(k)) : mesh.face(1, mesh.cell_i(k), mesh.cell_j(k) + 1);
}

// outward sign of +e for the boundary face: -1 on the min side
double outward_sign(const MacMesh& mesh, int axis, int f) { return mesh.minus_cell(axis, f) < 0 ? -1.0 : 1.0; }

}  // namespace

double boundary_outflow(const PrimalFluxes& F, const MacMesh& mesh) {
  double out = 0.0;
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      if (mesh.is_boundary(axis, f)) out += outward_sign(mesh, axis, f) * F[axis][f];
  return out;
}

PrimalField flux_balance_update(const PrimalField& rho, const PrimalFluxes& F, double dt, const MacMesh& mesh) {
  PrimalField out(rho.size(), 0.0);
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km >= 0) out[km] += F[axis][f];
      if (kp >= 0) out[kp] -= F[axis][f];
    }
  for (std::size_t k = 0; k < rho.size(); ++k) out[k] = rho[k] - dt / mesh.volume(static_cast<int>(k)) * out[k];
  return out;
}

int dual_neighbor(const MacMesh& mesh, int axis, int f, int edge) {
  const int pos = mesh.face_pos(axis, f), line = mesh.face_line(axis, f);
  switch (edge) {
    case 0: return pos > 0 ? mesh.face_along(axis, pos - 1, line) : -1;
    case 1: return pos < mesh.cells(axis) ? mesh.face_along(axis, pos + 1, line) : -1;
    case 2: return line > 0 ? mesh.face_along(axis, pos, line - 1) : -1;
    case 3: return line + 1 < mesh.cells(1 - axis) ? mesh.face_along(axis, pos, line + 1) : -1;
  }
  return -1;
}

void apply_velocity_bc(FaceField& u, const MacMesh& mesh, const VariableBc& bc) {
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    const int n = mesh.cells(axis);
    for (int line = 0; line < mesh.cells(1 - axis); ++line)
      for (int pos : {0, n}) {
        const int f = mesh.face_along(axis, pos, line);
        const SideBc& b = bc[mesh.boundary_side(axis, f)];
        switch (b.kind) {
          case BcKind::dirichlet: u[axis][f] = b.value; break;
          case BcKind::extrapolate: u[axis][f] = u[axis][mesh.face_along(axis, pos == 0 ? 1 : n - 1, line)]; break;
          default: u[axis][f] = 0.0;
        }
      }
  }
}

double boundary_density(const PrimalField& rho, const MacMesh& mesh, int axis, int f, const VariableBc& bc,
                        double u_normal) {
  const double inner = rho[mesh.inner_cell(axis, f)];
  if (u_normal >= 0.0) return inner;
  const SideBc& b = bc[mesh.boundary_side(axis, f)];
  return b.kind == BcKind::dirichlet ? b.value : inner;
}

FaceField eta_field(const PrimalField& rho, const FaceField& rho_sigma, const FaceField& rho_dual, double gamma,
                    const MacMesh& mesh) {
  (void)rho;
  FaceField eta = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      if (mesh.is_boundary(axis, f)) continue;
      const double rs = rho_sigma[axis][f];
      eta[axis][f] = gamma * 5.0 * rs * rs / (4.0 * rho_dual[axis][f]);
    }
  return eta;
}

PrimalFluxes convective_fluxes(const PrimalField& rho, const FaceField& rho_sigma, const FaceField& u,
                               const MacMesh& mesh, const VariableBc& density_bc) {
  PrimalFluxes F = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const double a = mesh.face_area(axis, f);
      const double v = u[axis][f];
      if (!mesh.is_boundary(axis, f)) {
        F[axis][f] = a * rho_sigma[axis][f] * v;
      } else if (v != 0.0) {
        const double rb = boundary_density(rho, mesh, axis, f, density_bc, outward_sign(mesh, axis, f) * v);
        F[axis][f] = a * rb * v;
      }
    }
  return F;
}

double compute_dt(const State& s, const MacMesh& mesh, const SchemeConfig& cfg) {
  const FaceField rho_sigma = interface_density(s.rho, mesh);
  const FaceField rho_dual = dual_average(s.rho, mesh);
  const FaceField eta = eta_field(s.rho, rho_sigma, rho_dual, cfg.gamma, mesh);
  double dt = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const double u = std::abs(s.u[axis][f]);
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km < 0 || kp < 0) {
        // open boundary: the transported mass must not exceed the cell content
        if (u == 0.0) continue;
        const int k = mesh.inner_cell(axis, f);
        dt = std::min(dt, 1.0 / (5.0 * mesh.perimeter(k) / mesh.volume(k) * u));
        continue;
      }
      const double m = std::max(mesh.perimeter(km) / mesh.volume(km), mesh.perimeter(kp) / mesh.volume(kp));
      const double eta_t = eta[axis][f] * mesh.face_area(axis, f) / (mesh.dual_volume(axis, f) * m);
      const double mu = std::min(s.rho[km], s.rho[kp]) / rho_sigma[axis][f];
      const double speed = u + std::sqrt(eta_t * std::abs(s.phi[kp] - s.phi[km]));
      if (speed > 0.0) dt = std::min(dt, mu / (5.0 * m * speed));
      // 4 dt^2 alpha <= 1 with rho_D^{n+1} >= (4/5) rho_D^n
      const double alpha = m * mesh.face_area(axis, f) / (mesh.dual_volume(axis, f) * 0.8 * rho_dual[axis][f]);
      dt = std::min(dt, 0.5 / std::sqrt(alpha));
    }
  return std::min(cfg.cfl * dt, cfg.dt_max);
}

FaceField implicit_coefficient(const FaceField& eta, double eps, double dt, const MacMesh& mesh) {
  FaceField c = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) c[axis][f] = eps * eps + eta[axis][f] * dt * dt;
  return c;
}

PbSolution implicit_potential_solve(const State& s, double dt, const FaceField& eta, const SchemeConfig& cfg,
                                    const MacMesh& mesh, const PrimalFluxes& convective) {
  PrimalField rhs = flux_balance_update(s.rho, convective, dt, mesh);
  EllipticProblem problem{mesh, implicit_coefficient(eta, cfg.eps, dt, mesh), std::move(rhs), cfg.bc.potential,
                          cfg.tol};
  return solve_pb(problem, s.phi);
}

PrimalFluxes stabilised_fluxes(const PrimalFluxes& convective, const FaceField& eta, const PrimalField& phi_np1,
                               double dt, const MacMesh& mesh) {
  PrimalFluxes F = convective;
  const FaceField g = gradient(phi_np1, mesh);
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      if (!mesh.is_boundary(axis, f)) F[axis][f] -= mesh.face_area(axis, f) * eta[axis][f] * dt * g[axis][f];
  return F;
}

PrimalField mass_update(const PrimalField& rho, const PrimalFluxes& fluxes, double dt, const MacMesh& mesh) {
  PrimalField out = flux_balance_update(rho, fluxes, dt, mesh);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!(out[k] > 0.0))
      throw StepError("density lost positivity at cell " + std::to_string(k) + " (rho = " + std::to_string(out[k]) +
                      "); time step too large");
  return out;
}

DualFluxes dual_fluxes(const PrimalFluxes& F, const MacMesh& mesh, int axis) {
  DualFluxes d;
  d.axis = axis;
  if (axis >= mesh.dimension()) return d;
  d.out.assign(mesh.num_faces(axis), {0.0, 0.0, 0.0, 0.0});
  const int b = 1 - axis;
  const bool lateral = mesh.dimension() == 2;
  for (int f = 0; f < mesh.num_faces(axis); ++f) {
    if (mesh.is_boundary(axis, f)) continue;
    const int pos = mesh.face_pos(axis, f), line = mesh.face_line(axis, f);
    const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
    const double fm = F[axis][mesh.face_along(axis, pos - 1, line)];
    const double f0 = F[axis][f];
    const double fp = F[axis][mesh.face_along(axis, pos + 1, line)];
    auto& o = d.out[f];
    o[0] = -0.5 * (fm + f0);
    o[1] = 0.5 * (f0 + fp);
    if (lateral) {
      o[2] = -0.5 * (F[b][lower_face(mesh, b, km)] + F[b][lower_face(mesh, b, kp)]);
      o[3] = 0.5 * (F[b][upper_face(mesh, b, km)] + F[b][upper_face(mesh, b, kp)]);
    }
  }
  return d;
}

std::vector<double> dual_mass_balance_residual(const PrimalField& rho_n, const PrimalField& rho_np1,
                                               const PrimalFluxes& fluxes, double dt, const MacMesh& mesh,
                                               int axis) {
  const FaceField dn = dual_average(rho_n, mesh), dnp1 = dual_average(rho_np1, mesh);
  const DualFluxes d = dual_fluxes(fluxes, mesh, axis);
  std::vector<double> res(mesh.num_faces(axis), 0.0);
  for (int f = 0; f < mesh.num_faces(axis); ++f) {
    if (mesh.is_boundary(axis, f)) continue;
    const auto& o = d.out[f];
    res[f] = mesh.dual_volume(axis, f) * (dnp1[axis][f] - dn[axis][f]) / dt + (o[0] + o[1] + o[2] + o[3]);
  }
  return res;
}

PrimalField lambda_field(const FaceField& u, double dt, const MacMesh& mesh) {
  PrimalField lam = divergence(u, mesh);
  for (double& x : lam) x *= dt;
  return lam;
}

FaceField ap_momentum_source(const FaceField& rho_sigma, const PrimalField& phi_np1, const PrimalField& lambda,
                             const MacMesh& mesh) {
  const FaceField gphi = gradient(phi_np1, mesh);
  const FaceField glam = gradient(lambda, mesh);
  FaceField src = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      if (!mesh.is_boundary(axis, f)) src[axis][f] = -rho_sigma[axis][f] * gphi[axis][f] + glam[axis][f];
  return src;
}

FaceField momentum_update(const MacMesh& mesh, const FaceField& u_n, const FaceField& rho_dual_n,
                          const FaceField& rho_dual_np1, const std::array<DualFluxes, 2>& dual, const FaceField& source,
                          double dt, const VariableBc& velocity_bc) {
  FaceField u = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    const auto& d = dual[axis];
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      if (mesh.is_boundary(axis, f)) continue;
      const double us = u_n[axis][f];
      double conv = 0.0;
      for (int e = 0; e < 4; ++e) {
        const double flux = d.out[f][e];
        if (flux == 0.0) continue;
        double up = us;
        if (flux < 0.0) {
          const int nb = dual_neighbor(mesh, axis, f, e);
          if (nb >= 0) {
            up = u_n[axis][nb];
          } else {
            // tangential ghost on a transverse boundary
            const int b = 1 - axis;
            const Side side = static_cast<Side>(2 * b + (e == 3 ? 1 : 0));
            const BcKind kind = velocity_bc[side].kind;
            up = (kind == BcKind::no_slip || kind == BcKind::dirichlet) ? 0.0 : us;
          }
        }
        conv += flux * up;
      }
      const double vol = mesh.dual_volume(axis, f);
      const double mom = rho_dual_n[axis][f] * us - dt / vol * conv + dt * source[axis][f];
      u[axis][f] = mom / rho_dual_np1[axis][f];
    }
  }
  apply_velocity_bc(u, mesh, velocity_bc);
  return u;
}

State advance(const MacMesh& mesh, const State& s, double dt, const SchemeConfig& cfg, StepDiagnostics* diag) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepError("time step must be positive and finite");
  FaceField u_n = s.u;
  apply_velocity_bc(u_n, mesh, cfg.bc.velocity);

  const FaceField rho_sigma = interface_density(s.rho, mesh);
  const FaceField rho_dual_n = dual_average(s.rho, mesh);
  const FaceField eta = eta_field(s.rho, rho_sigma, rho_dual_n, cfg.gamma, mesh);
  const PrimalFluxes conv = convective_fluxes(s.rho, rho_sigma, u_n, mesh, cfg.bc.density);

  State next;
  next.t = s.t + dt;
  State at_n = s;
  at_n.u = u_n;
  PbSolution pb = implicit_potential_solve(at_n, dt, eta, cfg, mesh, conv);
  next.phi = std::move(pb.phi);

  const PrimalFluxes F = stabilised_fluxes(conv, eta, next.phi, dt, mesh);
  next.rho = mass_update(s.rho, F, dt, mesh);
  const FaceField rho_dual_np1 = dual_average(next.rho, mesh);
  const std::array<DualFluxes, 2> dual{dual_fluxes(F, mesh, 0), dual_fluxes(F, mesh, 1)};
  const PrimalField lambda = lambda_field(u_n, dt, mesh);
  const FaceField src = ap_momentum_source(rho_sigma, next.phi, lambda, mesh);
  next.u = momentum_update(mesh, u_n, rho_dual_n, rho_dual_np1, dual, src, dt, cfg.bc.velocity);

  if (diag) {
    diag->dt = dt;
    diag->newton_iterations = pb.newton_iterations;
    diag->used_picard = pb.used_picard;
    diag->boundary_outflow = dt * boundary_outflow(F, mesh);
    int violations = 0;
    for (int axis = 0; axis < mesh.dimension(); ++axis)
      for (int f = 0; f < mesh.num_faces(axis); ++f)
        if (!mesh.is_boundary(axis, f) && rho_dual_n[axis][f] > 1.25 * rho_dual_np1[axis][f]) ++violations;
    diag->density_ratio_violations = violations;
  }
  return next;
}

State step(const MacMesh& mesh, const State& s, const SchemeConfig& cfg, StepDiagnostics* diag, double dt_limit) {
  double dt = std::min(compute_dt(s, mesh, cfg), dt_limit);
  if (!std::isfinite(dt)) throw StepError("time step is unbounded; set dt_max");
  for (int attempt = 0;; ++attempt) {
    try {
      State next = advance(mesh, s, dt, cfg, diag);
      if (diag) diag->retries = attempt;
      return next;
    } catch (const StepError&) {
      if (attempt >= 1) throw;
    } catch (const PreconditionError& e) {
      if (attempt >= 1) throw StepError(std::string("elliptic right side lost positivity: ") + e.what());
    } catch (const SolverError& e) {
      if (attempt >= 1) throw StepError(std::string("potential solve failed: ") + e.what());
    }
    dt *= 0.5;
  }
}

}  // namespace qnepb
