#include "qnepb/pbsolver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qnepb/discops.hpp"

namespace qnepb {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Couplings and Dirichlet contributions of -|K| div(c grad .), assembled once per problem.
struct Stencil {
  std::vector<LinearSystem::Coupling> couplings;  // w = c_sigma |sigma|^2/|D_sigma|
  std::vector<double> dirichlet_diag;             // per cell: sum of w over Dirichlet faces
  std::vector<double> dirichlet_rhs;              // per cell: sum of w * phi_b
  bool tridiagonal = false;
  bool cyclic = false;
};

Stencil build_stencil(const EllipticProblem& p) {
  const MacMesh& mesh = p.mesh;
  Stencil s;
  s.dirichlet_diag.assign(mesh.num_cells(), 0.0);
  s.dirichlet_rhs.assign(mesh.num_cells(), 0.0);
  bool any_periodic = false;
  for (int axis = 0; axis < mesh.dimension(); ++axis) {
    const bool periodic = p.bc.periodic_on(axis);
    any_periodic = any_periodic || periodic;
    if (static_cast<int>(p.coeff[axis].size()) != mesh.num_faces(axis))
      throw InputError("elliptic problem: coefficient size mismatch");
    for (int f = 0; f < mesh.num_faces(axis); ++f) {
      const double c = p.coeff[axis][f];
      const double w = face_weight(mesh, axis, f, p.bc);
      if (w == 0.0) continue;
      if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("elliptic problem: coefficient must be non-negative");
      const int km = mesh.minus_cell(axis, f), kp = mesh.plus_cell(axis, f);
      if (km >= 0 && kp >= 0) {
        s.couplings.push_back({km, kp, c * w});
        continue;
      }
      const SideBc& b = p.bc[mesh.boundary_side(axis, f)];
      if (b.kind == BcKind::dirichlet) {
        const int k = mesh.inner_cell(axis, f);
        s.dirichlet_diag[k] += c * w;
        s.dirichlet_rhs[k] += c * w * b.value;
      } else if (b.kind == BcKind::periodic && mesh.face_pos(axis, f) == 0) {
        const int line = mesh.face_line(axis, f);
        const int n = mesh.cells(axis);
        const int first = axis == 0 ? mesh.cell(0, line) : mesh.cell(line, 0);
        const int last = axis == 0 ? mesh.cell(n - 1, line) : mesh.cell(line, n - 1);
        s.couplings.push_back({last, first, c * w});
      }
    }
  }
  s.tridiagonal = mesh.dimension() == 1 && !any_periodic;
  s.cyclic = mesh.dimension() == 1 && any_periodic;
  return s;
}

// |K| * residual_K
std::vector<double> scaled_residual(const EllipticProblem& p, const Stencil& s, const PrimalField& phi) {
  const MacMesh& mesh = p.mesh;
  std::vector<double> res(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k)
    res[k] = s.dirichlet_diag[k] * phi[k] - s.dirichlet_rhs[k] + mesh.volume(k) * (std::exp(phi[k]) - p.rhs[k]);
  for (const auto& c : s.couplings) {
    const double flux = c.w * (phi[c.a] - phi[c.b]);
    res[c.a] += flux;
    res[c.b] -= flux;
  }
  return res;
}

double residual_norm(const EllipticProblem& p, const std::vector<double>& scaled) {
  double m = 0.0;
  for (int k = 0; k < p.mesh.num_cells(); ++k) {
    const double r = std::abs(scaled[k] / p.mesh.volume(k));
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    m = std::max(m, r);
  }
  return m;
}

double rhs_scale(const EllipticProblem& p) {
  const double m = max_abs(p.rhs);
  return m > 0.0 ? m : 1.0;
}

// attainable residual in floating point: stencil terms evaluated at phi times a few ulps
double roundoff_floor(const EllipticProblem& p, const Stencil& s, const PrimalField& phi) {
  std::vector<double> mag(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k)
    mag[k] = s.dirichlet_diag[k] * std::abs(phi[k]) + std::abs(s.dirichlet_rhs[k]);
  for (const auto& c : s.couplings) {
    const double m = c.w * (std::abs(phi[c.a]) + std::abs(phi[c.b]));
    mag[c.a] += m;
    mag[c.b] += m;
  }
  double f = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) f = std::max(f, mag[k] / p.mesh.volume(static_cast<int>(k)));
  return 64.0 * std::numeric_limits<double>::epsilon() * f;
}

void check_shape(const EllipticProblem& p) {
  if (static_cast<int>(p.rhs.size()) != p.mesh.num_cells()) throw InputError("elliptic problem: rhs size mismatch");
}

bool needs_positive_rhs(const EllipticProblem& p) { return !p.bc.has_dirichlet(); }

void check_positive_rhs(const EllipticProblem& p) {
  for (std::size_t k = 0; k < p.rhs.size(); ++k)
    if (!(p.rhs[k] > 0.0))
      throw PreconditionError("Poisson-Boltzmann right side is non-positive at cell " + std::to_string(k) +
                              " (no Dirichlet anchor)");
}

NewtonStep newton_step_impl(const EllipticProblem& p, const Stencil& s, const PrimalField& phi) {
  const MacMesh& mesh = p.mesh;
  const std::vector<double> res = scaled_residual(p, s, phi);
  const double res0 = residual_norm(p, res);

  LinearSystem sys;
  sys.diag.resize(mesh.num_cells());
  sys.rhs.resize(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    sys.diag[k] = s.dirichlet_diag[k] + mesh.volume(k) * std::exp(phi[k]);
    sys.rhs[k] = -res[k];
  }
  for (const auto& c : s.couplings) {
    sys.diag[c.a] += c.w;
    sys.diag[c.b] += c.w;
  }
  sys.couplings = s.couplings;
  sys.tridiagonal = s.tridiagonal;
  sys.cyclic = s.cyclic;
  const PrimalField delta = solve_linear(sys, p.tol.linear_tol);

  NewtonStep out;
  PrimalField trial(phi.size());
  double lambda = 1.0;
  for (int halvings = 0; halvings < 60; ++halvings, lambda *= 0.5) {
    for (std::size_t k = 0; k < phi.size(); ++k) trial[k] = phi[k] + lambda * delta[k];
    const double r = residual_norm(p, scaled_residual(p, s, trial));
    if (r < res0) {
      out.phi = trial;
      out.residual = r;
      out.lambda = lambda;
      return out;
    }
  }
  out.phi = phi;
  out.residual = res0;
  out.lambda = 0.0;
  out.decreased = false;
  return out;
}

}  // namespace

PrimalField solve_linear(const LinearSystem& sys, double rel_tol, LinearSolveInfo* info) {
  const int n = static_cast<int>(sys.diag.size());
  if (static_cast<int>(sys.rhs.size()) != n) throw InputError("solve_linear: size mismatch");
  for (double d : sys.diag)
    if (!(d > 0.0)) throw SolverError("solve_linear: non-positive diagonal (operator not positive definite)", 0.0);

  if (sys.tridiagonal) {
    // Thomas elimination; lower[i] couples i-1 and i
    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    for (const auto& c : sys.couplings) {
      const int i = std::min(c.a, c.b), j = std::max(c.a, c.b);
      if (j != i + 1) throw InputError("solve_linear: system flagged tridiagonal has a long-range coupling");
      upper[i] -= c.w;
      lower[j] -= c.w;
    }
    std::vector<double> cp(n), dp(n);
    double denom = sys.diag[0];
    cp[0] = upper[0] / denom;
    dp[0] = sys.rhs[0] / denom;
    for (int i = 1; i < n; ++i) {
      denom = sys.diag[i] - lower[i] * cp[i - 1];
      if (!(denom > 0.0)) throw SolverError("solve_linear: elimination broke down (indefinite system)", 0.0);
      cp[i] = upper[i] / denom;
      dp[i] = (sys.rhs[i] - lower[i] * dp[i - 1]) / denom;
    }
    PrimalField x(n);
    x[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    if (info) {
      info->iterations = 1;
      double rn = 0.0, bn = 0.0;
      std::vector<double> ax(n);
      for (int i = 0; i < n; ++i) ax[i] = sys.diag[i] * x[i];
      for (const auto& c : sys.couplings) {
        ax[c.a] -= c.w * x[c.b];
        ax[c.b] -= c.w * x[c.a];
      }
      for (int i = 0; i < n; ++i) {
        rn += (ax[i] - sys.rhs[i]) * (ax[i] - sys.rhs[i]);
        bn += sys.rhs[i] * sys.rhs[i];
      }
      info->relative_residual = bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
    }
    return x;
  }

  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n + 2 * sys.couplings.size());
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, sys.diag[i]);
  for (const auto& c : sys.couplings) {
    trip.emplace_back(c.a, c.b, -c.w);
    trip.emplace_back(c.b, c.a, -c.w);
  }
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), n);

  if (sys.cyclic) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    Eigen::VectorXd x = ldlt.solve(b);
    if (ldlt.info() == Eigen::Success && x.allFinite()) {
      if (info) {
        info->iterations = 1;
        const double bn = b.norm();
        info->relative_residual = (A * x - b).norm() / (bn > 0.0 ? bn : 1.0);
      }
      return PrimalField(x.data(), x.data() + n);
    }
  }

  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(rel_tol);
  cg.setMaxIterations(std::max(100, 10 * n));
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success || !x.allFinite())
    throw SolverError("solve_linear: conjugate gradient did not converge", cg.error());
  if (info) {
    info->iterations = static_cast<int>(cg.iterations());
    info->relative_residual = cg.error();
  }
  return PrimalField(x.data(), x.data() + n);
}

PrimalField default_initial_guess(const PrimalField& rhs) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double r : rhs)
    if (r > 0.0) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  if (!(hi > 0.0)) return PrimalField(rhs.size(), 0.0);
  PrimalField phi(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) phi[k] = std::log(std::clamp(rhs[k], lo, hi));
  return phi;
}

PrimalField pb_residual(const EllipticProblem& problem, const PrimalField& phi) {
  check_shape(problem);
  const Stencil s = build_stencil(problem);
  std::vector<double> res = scaled_residual(problem, s, phi);
  for (int k = 0; k < problem.mesh.num_cells(); ++k) res[k] /= problem.mesh.volume(k);
  return res;
}

double pb_residual_norm(const EllipticProblem& problem, const PrimalField& phi) {
  check_shape(problem);
  const Stencil s = build_stencil(problem);
  return residual_norm(problem, scaled_residual(problem, s, phi));
}

NewtonStep newton_step(const EllipticProblem& problem, const PrimalField& phi) {
  check_shape(problem);
  return newton_step_impl(problem, build_stencil(problem), phi);
}

PbSolution picard_solve(const EllipticProblem& p) {
  check_shape(p);
  if (p.bc.has_dirichlet()) throw InputError("picard_solve: requires Neumann or periodic potential conditions");
  check_positive_rhs(p);
  const MacMesh& mesh = p.mesh;
  const Stencil s = build_stencil(p);
  const double scale = rhs_scale(p);

  PbSolution out;
  PrimalField v = p.rhs;
  LinearSystem sys;
  sys.rhs.resize(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) sys.rhs[k] = mesh.volume(k) * p.rhs[k];
  sys.tridiagonal = s.tridiagonal;
  sys.cyclic = s.cyclic;
  double diff = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= p.tol.max_picard; ++it) {
    sys.diag.assign(mesh.num_cells(), 0.0);
    for (int k = 0; k < mesh.num_cells(); ++k) sys.diag[k] = mesh.volume(k);
    sys.couplings = s.couplings;
    for (auto& c : sys.couplings) {
      c.w /= log_mean(v[c.a], v[c.b]);
      sys.diag[c.a] += c.w;
      sys.diag[c.b] += c.w;
    }
    const PrimalField u = solve_linear(sys, p.tol.linear_tol);
    diff = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) diff = std::max(diff, std::abs(u[k] - v[k]));
    v = u;
    out.picard_iterations = it;
    out.residual_history.push_back(diff);
    if (diff <= p.tol.picard_tol * scale) break;
  }
  if (diff > p.tol.picard_tol * scale) throw SolverError("picard_solve: fixed point iteration stagnated", diff);
  out.phi.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.phi[k] = std::log(v[k]);
  out.used_picard = true;
  out.residual = residual_norm(p, scaled_residual(p, s, out.phi));
  return out;
}

PbSolution solve_pb(const EllipticProblem& p, const PrimalField& phi_init) {
  check_shape(p);
  const bool pure_neumann = needs_positive_rhs(p);
  if (pure_neumann) check_positive_rhs(p);
  const Stencil s = build_stencil(p);
  const double target = p.tol.newton_tol * rhs_scale(p);

  PbSolution out;
  out.phi = phi_init.empty() ? default_initial_guess(p.rhs) : phi_init;
  if (out.phi.size() != p.rhs.size()) throw InputError("solve_pb: initial guess size mismatch");
  auto done = [&](const PrimalField& phi, double r) { return r <= std::max(target, roundoff_floor(p, s, phi)); };
  double res = residual_norm(p, scaled_residual(p, s, out.phi));
  out.residual_history.push_back(res);
  bool converged = done(out.phi, res);
  try {
    while (!converged && out.newton_iterations < p.tol.max_newton) {
      NewtonStep st = newton_step_impl(p, s, out.phi);
      ++out.newton_iterations;
      if (!st.decreased) break;
      out.phi = std::move(st.phi);
      res = st.residual;
      out.residual_history.push_back(res);
      converged = done(out.phi, res);
    }
  } catch (const SolverError&) {
    converged = false;
  }
  out.residual = res;
  if (converged) return out;

  if (!pure_neumann) throw SolverError("Poisson-Boltzmann Newton iteration failed", res);
  PbSolution fb = picard_solve(p);
  fb.newton_iterations = out.newton_iterations;
  if (!done(fb.phi, fb.residual)) {
    // Picard lands in the basin of attraction; finish with Newton
    PrimalField phi = fb.phi;
    double r = fb.residual;
    for (int it = 0; it < p.tol.max_newton && !done(phi, r); ++it) {
      NewtonStep st = newton_step_impl(p, s, phi);
      ++fb.newton_iterations;
      if (!st.decreased) break;
      phi = std::move(st.phi);
      r = st.residual;
    }
    if (!done(phi, r)) throw SolverError("Poisson-Boltzmann solve failed after Picard fallback", r);
    fb.phi = std::move(phi);
    fb.residual = r;
  }
  return fb;
}

}  // namespace qnepb
