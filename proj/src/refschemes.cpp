#include "qnepb/refschemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnepb {

CollocatedState project_collocated(const InitialData& data, const MacMesh& mesh, const SchemeConfig& cfg) {
  CollocatedState s;
  s.rho = mesh.cell_field();
  for (auto& c : s.u) c = mesh.cell_field();
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const double x = mesh.cell_center(0, k);
    const double y = mesh.dimension() == 2 ? mesh.cell_center(1, k) : 0.0;
    s.rho[k] = data.rho(x, y);
    if (!(s.rho[k] > 0.0)) throw InputError("projected initial density is non-positive at cell " + std::to_string(k));
    for (int a = 0; a < mesh.dimension(); ++a)
      if (data.u[a]) s.u[a][k] = data.u[a](x, y);
  }
  s.phi = equilibrium_potential(s.rho, mesh, cfg.eps, cfg.bc.potential, cfg.tol);
  return s;
}

double rusanov_dt(const CollocatedState& s, const MacMesh& mesh, double cfl) {
  double rate = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    double r = 0.0;
    for (int a = 0; a < mesh.dimension(); ++a) {
      const int idx = a == 0 ? mesh.cell_i(k) : mesh.cell_j(k);
      r += (std::abs(s.u[a][k]) + 1.0) / mesh.width(a, idx);
    }
    rate = std::max(rate, r);
  }
  return cfl / rate;
}

namespace {

struct Conserved {
  double rho;
  std::array<double, 2> m;
};

// Ghost state across a boundary face for the collocated scheme.
Conserved ghost_state(const Conserved& in, int axis, Side side, const BoundarySpec& bc) {
  Conserved g = in;
  const SideBc& d = bc.density[side];
  if (d.kind == BcKind::dirichlet) g.rho = d.value;
  const SideBc& v = bc.velocity[side];
  const int t = 1 - axis;
  const double un = in.m[axis] / in.rho, ut = in.m[t] / in.rho;
  double gn = un, gt = ut;
  switch (v.kind) {
    case BcKind::no_slip: gn = -un; gt = -ut; break;
    case BcKind::neumann_zero: gn = -un; break;
    case BcKind::dirichlet: gn = 2.0 * v.value - un; gt = 0.0; break;
    default: break;
  }
  g.m[axis] = g.rho * gn;
  g.m[t] = g.rho * gt;
  return g;
}

// Rusanov flux along `axis` from left state a to right state b.
Conserved rusanov_flux(const Conserved& a, const Conserved& b, int axis) {
  const double ua = a.m[axis] / a.rho, ub = b.m[axis] / b.rho;
  const double lambda = std::max(std::abs(ua), std::abs(ub)) + 1.0;
  Conserved f;
  f.rho = 0.5 * (a.m[axis] + b.m[axis]) - 0.5 * lambda * (b.rho - a.rho);
  for (int c = 0; c < 2; ++c) f.m[c] = 0.5 * (a.m[axis] * a.m[c] / a.rho + b.m[axis] * b.m[c] / b.rho) - 0.5 * lambda * (b.m[c] - a.m[c]);
  return f;
}

}  // namespace

PrimalField collocated_gradient(const PrimalField& phi, const MacMesh& mesh, int axis, const VariableBc& bc) {
  PrimalField g = mesh.cell_field();
  const int n = mesh.cells(axis);
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const int p = axis == 0 ? mesh.cell_i(k) : mesh.cell_j(k);
    const int line = axis == 0 ? mesh.cell_j(k) : mesh.cell_i(k);
    auto at = [&](int q) { return axis == 0 ? mesh.cell(q, line) : mesh.cell(line, q); };
    const double h = mesh.width(axis, p);
    // neighbour value and centre distance on each side
    auto neighbour = [&](bool upper) -> std::pair<double, double> {
      const int q = upper ? p + 1 : p - 1;
      if (q >= 0 && q < n) return {phi[at(q)], std::abs(mesh.center(axis, q) - mesh.center(axis, p))};
      const SideBc& b = bc[static_cast<Side>(2 * axis + (upper ? 1 : 0))];
      switch (b.kind) {
        case BcKind::dirichlet: return {2.0 * b.value - phi[k], h};
        case BcKind::periodic: {
          const int w = upper ? 0 : n - 1;
          return {phi[at(w)], 0.5 * (h + mesh.width(axis, w))};
        }
        default: return {phi[k], h};
      }
    };
    const auto [lo, dlo] = neighbour(false);
    const auto [hi, dhi] = neighbour(true);
    g[k] = (hi - lo) / (dlo + dhi);
  }
  return g;
}

CollocatedState rusanov_step(const MacMesh& mesh, const CollocatedState& s, double dt, const SchemeConfig& cfg,
                             double* outflow) {
  const int nc = mesh.num_cells();
  std::vector<Conserved> w(nc), dw(nc, Conserved{0.0, {0.0, 0.0}});
  double leaving = 0.0;
  for (int k = 0; k < nc; ++k) w[k] = {s.rho[k], {s.rho[k] * s.u[0][k], s.rho[k] * s.u[1][k]}};

  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      const Side side = km < 0 || kp < 0 ? mesh.boundary_side(axis, f) : Side::xmin;
      const Conserved a = km >= 0 ? w[km] : ghost_state(w[kp], axis, side, cfg.bc);
      const Conserved b = kp >= 0 ? w[kp] : ghost_state(w[km], axis, side, cfg.bc);
      const Conserved fl = rusanov_flux(a, b, axis);
      const double area = mesh.face_area(axis, f);
      if (km < 0) leaving -= area * fl.rho;
      if (kp < 0) leaving += area * fl.rho;
      if (km >= 0) {
        dw[km].rho += area * fl.rho;
        for (int c = 0; c < 2; ++c) dw[km].m[c] += area * fl.m[c];
      }
      if (kp >= 0) {
        dw[kp].rho -= area * fl.rho;
        for (int c = 0; c < 2; ++c) dw[kp].m[c] -= area * fl.m[c];
      }
    }

  CollocatedState next;
  next.t = s.t + dt;
  next.rho = mesh.cell_field();
  std::array<PrimalField, 2> mom{mesh.cell_field(), mesh.cell_field()};
  for (int k = 0; k < nc; ++k) {
    const double r = dt / mesh.volume(k);
    next.rho[k] = w[k].rho - r * dw[k].rho;
    if (!(next.rho[k] > 0.0))
      throw StepError("collocated scheme lost positivity at cell " + std::to_string(k));
    for (int c = 0; c < 2; ++c) mom[c][k] = w[k].m[c] - r * dw[k].m[c];
  }
  if (outflow) *outflow = dt * leaving;
  next.phi = equilibrium_potential(next.rho, mesh, cfg.eps, cfg.bc.potential, cfg.tol, s.phi);
  for (int a = 0; a < 2; ++a) {
    next.u[a] = mesh.cell_field();
    if (a >= mesh.dimension()) continue;
    const PrimalField g = collocated_gradient(next.phi, mesh, a, cfg.bc.potential);
    for (int k = 0; k < nc; ++k) next.u[a][k] = (mom[a][k] - dt * next.rho[k] * g[k]) / next.rho[k];
  }
  return next;
}

IceState ice_from_state(const State& s) { return IceState{s.t, s.rho, s.u}; }

double ice_dt(const IceState& s, const MacMesh& mesh, const SchemeConfig& cfg) {
  State st{s.t, s.rho, s.u, s.rho};
  for (double& v : st.phi) v = std::log(v);
  return compute_dt(st, mesh, cfg);
}

FaceField ice_momentum_source(const PrimalField& rho_np1, const FaceField& rho_sigma_n, const PrimalField& ln_rho_np1,
                              const PrimalField& lambda, const MacMesh& mesh) {
  const FaceField rho_sigma_np1 = interface_density(rho_np1, mesh);
  const FaceField grho = gradient(rho_np1, mesh);
  const FaceField gln = gradient(ln_rho_np1, mesh);
  const FaceField glam = gradient(lambda, mesh);
  FaceField src = mesh.face_field();
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      if (mesh.is_boundary(axis, f)) continue;
      const double star =
          grho[axis][f] - (rho_sigma_np1[axis][f] - rho_sigma_n[axis][f]) * gln[axis][f] - glam[axis][f];
      src[axis][f] = -star;
    }
  return src;
}

IceState ice_step(const MacMesh& mesh, const IceState& s, double dt, const SchemeConfig& cfg, double* outflow) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepError("time step must be positive and finite");
  FaceField u_n = s.u;
  apply_velocity_bc(u_n, mesh, cfg.bc.velocity);
  const FaceField rho_sigma = interface_density(s.rho, mesh);
  const FaceField rho_dual_n = dual_average(s.rho, mesh);
  const FaceField eta = eta_field(s.rho, rho_sigma, rho_dual_n, cfg.gamma, mesh);
  const PrimalFluxes conv = convective_fluxes(s.rho, rho_sigma, u_n, mesh, cfg.bc.density);

  PrimalField rhs = flux_balance_update(s.rho, conv, dt, mesh);
  PrimalField guess = s.rho;
  for (double& v : guess) v = std::log(v);
  EllipticProblem problem{mesh, implicit_coefficient(eta, 0.0, dt, mesh), std::move(rhs),
                          VariableBc::all(BcKind::neumann_zero), cfg.tol};
  const PrimalField ln_rho = solve_pb(problem, guess).phi;

  const PrimalFluxes F = stabilised_fluxes(conv, eta, ln_rho, dt, mesh);
  IceState next;
  next.t = s.t + dt;
  next.rho = mass_update(s.rho, F, dt, mesh);
  if (outflow) *outflow = dt * boundary_outflow(F, mesh);
  const FaceField rho_dual_np1 = dual_average(next.rho, mesh);
  const std::array<DualFluxes, 2> dual{dual_fluxes(F, mesh, 0), dual_fluxes(F, mesh, 1)};
  const PrimalField lambda = lambda_field(u_n, dt, mesh);
  const FaceField src = ice_momentum_source(next.rho, rho_sigma, ln_rho, lambda, mesh);
  next.u = momentum_update(mesh, u_n, rho_dual_n, rho_dual_np1, dual, src, dt, cfg.bc.velocity);
  return next;
}

}  // namespace qnepb
