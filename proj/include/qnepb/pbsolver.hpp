#pragma once

#include <stdexcept>
#include <vector>

#include "qnepb/mesh.hpp"

namespace qnepb {

/// Nonlinear or linear solver failure; carries the last residual norm reached.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Right-hand side not strictly positive for a problem without a Dirichlet anchor.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

struct PbTolerances {
  double newton_tol = 1e-10;   // on max_K |residual_K|, relative to max_K |r_K|
  double linear_tol = 1e-12;   // relative residual of each linear solve
  double picard_tol = 1e-10;   // on max_K |u_K - v_K|, relative to max_K r_K
  int max_newton = 50;
  int max_picard = 200;

  bool operator==(const PbTolerances&) const = default;
};

/// -div(c grad phi)_K + exp(phi_K) = r_K on the mesh, with potential boundary conditions.
/// The coefficient c lives on faces; on a periodic line the value at position 0 is used
/// for the shared wrap face.
struct EllipticProblem {
  const MacMesh& mesh;
  FaceField coeff;
  PrimalField rhs;
  VariableBc bc;
  PbTolerances tol{};
};

/// Symmetric stencil system  diag_i x_i - sum_{(i,j,w)} w x_j = rhs_i  (both orderings implied).
struct LinearSystem {
  struct Coupling {
    int a;
    int b;
    double w;
  };
  std::vector<double> diag;
  std::vector<Coupling> couplings;
  std::vector<double> rhs;
  /// Couplings only join consecutive unknowns (1D line without wraparound).
  bool tridiagonal = false;
  /// 1D line closed by one wraparound coupling; solved by sparse factorisation.
  bool cyclic = false;
};

struct LinearSolveInfo {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Thomas elimination for tridiagonal systems, sparse LDL^T for cyclic ones, diagonally
/// preconditioned CG otherwise.
PrimalField solve_linear(const LinearSystem& system, double rel_tol = 1e-12, LinearSolveInfo* info = nullptr);

/// max_K |-div(c grad phi)_K + exp(phi_K) - r_K|.
double pb_residual_norm(const EllipticProblem& problem, const PrimalField& phi);
PrimalField pb_residual(const EllipticProblem& problem, const PrimalField& phi);

struct NewtonStep {
  PrimalField phi;
  double residual = 0.0;  // max-norm residual at the returned phi
  double lambda = 1.0;
  bool decreased = true;
};

/// One damped Newton step: solve (-div(c grad .) + diag(exp phi)) delta = -residual and
/// halve lambda from 1 until the residual decreases.
NewtonStep newton_step(const EllipticProblem& problem, const PrimalField& phi);

struct PbSolution {
  PrimalField phi;
  double residual = 0.0;
  int newton_iterations = 0;
  int picard_iterations = 0;
  bool used_picard = false;
  std::vector<double> residual_history;
};

/// Fixed point on z = exp(phi): -div((c/z_sigma) grad u) + u = r with z_sigma the log-mean of
/// the previous iterate, started from v = r. Requires no Dirichlet side and r > 0.
PbSolution picard_solve(const EllipticProblem& problem);

/// Newton from `phi_init` (or ln of the clipped right side when empty), Picard fallback.
PbSolution solve_pb(const EllipticProblem& problem, const PrimalField& phi_init = {});

/// ln(clamp(r, smallest positive r, max r)).
PrimalField default_initial_guess(const PrimalField& rhs);

}  // namespace qnepb
