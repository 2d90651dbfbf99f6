#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "qnepb/discops.hpp"
#include "qnepb/mesh.hpp"
#include "qnepb/pbsolver.hpp"

namespace qnepb {

/// (rho, u, phi) at one time level. `u` holds normal velocities on all faces; external
/// faces carry the values imposed by the velocity boundary condition.
struct State {
  double t = 0.0;
  PrimalField rho;
  FaceField u;
  PrimalField phi;
};

struct SchemeConfig {
  double eps = 1.0;
  double gamma = 1.01;     // eta safety factor (> 1)
  double cfl = 0.9;        // theta in (0, 1]
  double dt_max = std::numeric_limits<double>::infinity();
  PbTolerances tol{};
  BoundarySpec bc{};

  /// eps may be 0 only when `allow_zero_eps` (the limit-scheme check).
  void validate(int dimension, bool allow_zero_eps = false) const;
};

/// Thrown when a step cannot produce a valid state (positivity loss, dt underflow).
class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrated mass fluxes |sigma| (rho_sigma u_sigma - Q_sigma) along +e on every face.
using PrimalFluxes = FaceField;

/// Outward fluxes through the four edges of each dual cell D_sigma of one axis family,
/// ordered {axial minus, axial plus, lateral minus, lateral plus}. Entries for external
/// faces are unused (zero).
struct DualFluxes {
  int axis = 0;
  std::vector<std::array<double, 4>> out;
};

/// Face across dual edge `edge` of D_sigma, or -1 when the edge lies on the domain boundary.
int dual_neighbor(const MacMesh& mesh, int axis, int f, int edge);

/// Write boundary-condition values into the external faces of a velocity field.
void apply_velocity_bc(FaceField& u, const MacMesh& mesh, const VariableBc& bc);

/// Density carried by a boundary face: the inner cell on outflow, the Dirichlet value
/// (or the inner cell otherwise) on inflow.
double boundary_density(const PrimalField& rho, const MacMesh& mesh, int axis, int f, const VariableBc& bc,
                        double u_normal);

/// eta_sigma = gamma * 5 rho_sigma^2 / (4 rho_D) on interior faces, 0 on external ones.
FaceField eta_field(const PrimalField& rho, const FaceField& rho_sigma, const FaceField& rho_dual, double gamma,
                    const MacMesh& mesh);

/// Convective part |sigma| rho_sigma u_sigma of the mass flux, with upwinded boundary densities.
PrimalFluxes convective_fluxes(const PrimalField& rho, const FaceField& rho_sigma, const FaceField& u,
                               const MacMesh& mesh, const VariableBc& density_bc);

/// Largest dt allowed by the explicit positivity/stability rule, times cfl, capped by dt_max.
double compute_dt(const State& s, const MacMesh& mesh, const SchemeConfig& cfg);

/// Coefficient eps^2 + eta dt^2 (eta vanishes on external faces).
FaceField implicit_coefficient(const FaceField& eta, double eps, double dt, const MacMesh& mesh);

/// phi^{n+1} from -div((eps^2 + eta dt^2) grad phi) + exp(phi) = rho^n - dt div(rho_sigma u^n).
PbSolution implicit_potential_solve(const State& s, double dt, const FaceField& eta, const SchemeConfig& cfg,
                                    const MacMesh& mesh, const PrimalFluxes& convective);

/// Full primal fluxes including the stabilisation shift Q = eta dt grad phi^{n+1}.
PrimalFluxes stabilised_fluxes(const PrimalFluxes& convective, const FaceField& eta, const PrimalField& phi_np1,
                               double dt, const MacMesh& mesh);

/// rho - dt/|K| sum of outward fluxes, without a positivity check.
PrimalField flux_balance_update(const PrimalField& rho, const PrimalFluxes& fluxes, double dt, const MacMesh& mesh);

/// rho^{n+1} = rho^n - dt/|K| sum of outward fluxes. Throws StepError naming the first
/// non-positive cell.
PrimalField mass_update(const PrimalField& rho, const PrimalFluxes& fluxes, double dt, const MacMesh& mesh);

/// Net mass rate leaving the domain through external faces (outward positive).
double boundary_outflow(const PrimalFluxes& fluxes, const MacMesh& mesh);

DualFluxes dual_fluxes(const PrimalFluxes& fluxes, const MacMesh& mesh, int axis);

/// |D|(rho_D^{n+1} - rho_D^n)/dt + sum of outward dual fluxes, per face of `axis` (0 on external faces).
std::vector<double> dual_mass_balance_residual(const PrimalField& rho_n, const PrimalField& rho_np1,
                                               const PrimalFluxes& fluxes, double dt, const MacMesh& mesh,
                                               int axis);

/// Lambda_K = dt (div u)_K.
PrimalField lambda_field(const FaceField& u, double dt, const MacMesh& mesh);

/// rho_D^{n+1} u^{n+1} = rho_D^n u^n - (dt/|D|) sum_e F_e u_up + dt * source on interior faces,
/// upwinding each dual edge; external faces are then filled from `velocity_bc`.
FaceField momentum_update(const MacMesh& mesh, const FaceField& u_n, const FaceField& rho_dual_n,
                          const FaceField& rho_dual_np1, const std::array<DualFluxes, 2>& dual, const FaceField& source,
                          double dt, const VariableBc& velocity_bc);

/// Source -rho_sigma^n (grad phi^{n+1}) + grad Lambda^n on interior faces.
FaceField ap_momentum_source(const FaceField& rho_sigma, const PrimalField& phi_np1, const PrimalField& lambda,
                             const MacMesh& mesh);

struct StepDiagnostics {
  double dt = 0.0;
  int newton_iterations = 0;
  bool used_picard = false;
  int retries = 0;
  /// mass leaving through the boundary during the step (negative for net inflow)
  double boundary_outflow = 0.0;
  /// faces where rho_D^n / rho_D^{n+1} exceeded 5/4
  int density_ratio_violations = 0;
};

/// One step with a prescribed dt (no retry logic).
State advance(const MacMesh& mesh, const State& s, double dt, const SchemeConfig& cfg,
              StepDiagnostics* diag = nullptr);

/// compute_dt, clip to `dt_limit`, advance; on positivity loss or a non-positive elliptic
/// right side retry once with dt/2.
State step(const MacMesh& mesh, const State& s, const SchemeConfig& cfg, StepDiagnostics* diag = nullptr,
           double dt_limit = std::numeric_limits<double>::infinity());

}  // namespace qnepb
