#pragma once

#include <array>

#include "qnepb/apscheme.hpp"
#include "qnepb/initial.hpp"

namespace qnepb {

/// Cell-centred (rho, velocity, phi) for the explicit reference scheme.
struct CollocatedState {
  double t = 0.0;
  PrimalField rho;
  std::array<PrimalField, 2> u;
  PrimalField phi;
};

/// Limit-system state: density and face velocities.
struct IceState {
  double t = 0.0;
  PrimalField rho;
  FaceField u;
};

CollocatedState project_collocated(const InitialData& data, const MacMesh& mesh, const SchemeConfig& cfg);

/// cfl / max_K sum_a (max|u_a| + 1)/h_a with the Rusanov wave-speed bound.
double rusanov_dt(const CollocatedState& s, const MacMesh& mesh, double cfl);

/// Explicit Rusanov update of (rho, rho u), then the Poisson-Boltzmann solve with rho^{n+1}
/// and the collocated source -rho^{n+1} grad phi^{n+1}. Throws StepError on positivity loss.
/// `outflow`, when given, receives the mass leaving through the boundary during the step.
CollocatedState rusanov_step(const MacMesh& mesh, const CollocatedState& s, double dt, const SchemeConfig& cfg,
                             double* outflow = nullptr);

/// Centred cell gradient of phi along `axis` using boundary ghosts from `bc`.
PrimalField collocated_gradient(const PrimalField& phi, const MacMesh& mesh, int axis, const VariableBc& bc);

IceState ice_from_state(const State& s);

/// The ap time-step rule evaluated on (rho, U, ln rho).
double ice_dt(const IceState& s, const MacMesh& mesh, const SchemeConfig& cfg);

/// Semi-implicit step of the isothermal limit system: implicit solve for ln rho^{n+1}
/// with coefficient eta dt^2, explicit mass update, momentum with the starred pressure gradient.
IceState ice_step(const MacMesh& mesh, const IceState& s, double dt, const SchemeConfig& cfg,
                  double* outflow = nullptr);

/// Source -(grad rho^{n+1})* of the limit momentum equation on interior faces.
FaceField ice_momentum_source(const PrimalField& rho_np1, const FaceField& rho_sigma_n, const PrimalField& ln_rho_np1,
                              const PrimalField& lambda, const MacMesh& mesh);

}  // namespace qnepb
