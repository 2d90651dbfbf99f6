#include "qnepb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"
#include "qnepb/diagnostics.hpp"
#include "qnepb/runner.hpp"

namespace qnepb {

namespace {

MacMesh random_mesh(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> n(3, 12);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  auto coords = [&](int cells) {
    std::vector<double> c{0.0};
    for (int i = 0; i < cells; ++i) c.push_back(c.back() + w(rng));
    return c;
  };
  return dim == 1 ? build_mesh(coords(n(rng))) : build_mesh(coords(n(rng)), coords(n(rng)));
}

PrimalField random_cells(std::mt19937_64& rng, const MacMesh& mesh, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  PrimalField q = mesh.cell_field();
  for (double& v : q) v = d(rng);
  return q;
}

FaceField random_faces(std::mt19937_64& rng, const MacMesh& mesh, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  FaceField v = mesh.face_field();
  for (int a = 0; a < mesh.dimension(); ++a)
    for (double& x : v[a]) x = d(rng);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void operators_suite(std::vector<CheckResult>& out, int trials) {
  std::mt19937_64 rng(20240601);
  double duality = 0.0, balance = 0.0, symmetry = 0.0;
  for (int dim = 1; dim <= 2; ++dim)
    for (int t = 0; t < trials; ++t) {
      const MacMesh mesh = random_mesh(rng, dim);
      const PrimalField q = random_cells(rng, mesh, -1.0, 1.0);
      const FaceField v = random_faces(rng, mesh, -1.0, 1.0);
      const double scale = max_abs(q) * std::max(max_abs(v[0]), max_abs(v[1])) * mesh.domain_measure();
      duality = std::max(duality, std::abs(duality_residual(q, v, mesh)) / scale);

      const PrimalField rho = random_cells(rng, mesh, 0.5, 2.0);
      const PrimalFluxes F = random_faces(rng, mesh, -0.1, 0.1);
      const double dt = 0.1;
      const PrimalField rho1 = flux_balance_update(rho, F, dt, mesh);
      for (int a = 0; a < dim; ++a) {
        const auto res = dual_mass_balance_residual(rho, rho1, F, dt, mesh, a);
        double ref = 0.0;
        for (int f = 0; f < mesh.num_faces(a); ++f) ref = std::max(ref, mesh.dual_volume(a, f) * 2.0 / dt);
        balance = std::max(balance, max_abs(res) / ref);
      }

      const PrimalField p = random_cells(rng, mesh, -1.0, 1.0);
      const VariableBc neumann = VariableBc::all(BcKind::neumann_zero);
      const PrimalField lq = laplacian(q, mesh, neumann), lp = laplacian(p, mesh, neumann);
      double a = 0.0, b = 0.0, s = 0.0;
      for (int k = 0; k < mesh.num_cells(); ++k) {
        a += mesh.volume(k) * p[k] * lq[k];
        b += mesh.volume(k) * q[k] * lp[k];
        s += mesh.volume(k) * std::abs(p[k] * lq[k]);
      }
      symmetry = std::max(symmetry, std::abs(a - b) / s);
    }
  out.push_back({"operators", "div_grad_duality", duality <= 1e-12, duality, 1e-12});
  out.push_back({"operators", "dual_mass_balance", balance <= 1e-12, balance, 1e-12});
  out.push_back({"operators", "laplacian_symmetry", symmetry <= 1e-12, symmetry, 1e-12});
}

void pb_suite(std::vector<CheckResult>& out, int trials) {
  std::mt19937_64 rng(777);
  const VariableBc neumann = VariableBc::all(BcKind::neumann_zero);
  double constant = 0.0, comparison = 0.0, bounds = 0.0, agreement = 0.0;
  for (int t = 0; t < trials; ++t) {
    const MacMesh mesh = random_mesh(rng, 1 + t % 2);
    std::uniform_real_distribution<double> eps_d(0.05, 1.0);
    const double eps = eps_d(rng);
    const FaceField c = mesh.face_field(eps * eps);

    const double c0 = std::uniform_real_distribution<double>(0.2, 4.0)(rng);
    const PbSolution sc = solve_pb({mesh, c, mesh.cell_field(c0), neumann});
    for (double v : sc.phi) constant = std::max(constant, std::abs(v - std::log(c0)));

    const PrimalField r = random_cells(rng, mesh, 0.1, 5.0);
    PrimalField r2 = r;
    for (double& v : r2) v += std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const PrimalField phi = solve_pb({mesh, c, r, neumann}).phi;
    const PrimalField phi2 = solve_pb({mesh, c, r2, neumann}).phi;
    const double lo = std::log(*std::min_element(r.begin(), r.end()));
    const double hi = std::log(*std::max_element(r.begin(), r.end()));
    for (int k = 0; k < mesh.num_cells(); ++k) {
      comparison = std::max(comparison, phi[k] - phi2[k]);
      bounds = std::max({bounds, lo - phi[k], phi[k] - hi});
    }
    EllipticProblem tight{mesh, c, r, neumann};
    tight.tol.picard_tol = 1e-13;
    tight.tol.max_picard = 2000;
    const PrimalField pic = picard_solve(tight).phi;
    for (int k = 0; k < mesh.num_cells(); ++k) agreement = std::max(agreement, std::abs(pic[k] - phi[k]));
  }
  out.push_back({"pb", "constant_solution", constant <= 1e-10, constant, 1e-10});
  out.push_back({"pb", "comparison_principle", comparison <= 1e-12, comparison, 1e-12});
  out.push_back({"pb", "neumann_bounds", bounds <= 1e-12, bounds, 1e-12});
  out.push_back({"pb", "newton_picard_agreement", agreement <= 1e-8, agreement, 1e-8});
}

void energy_suite(std::vector<CheckResult>& out) {
  RunConfig cfg;
  cfg.spec = get_case("five_branch");
  cfg.spec.t_final = 0.25;
  const RunResult r = run(cfg);
  const auto& rec = r.series.records();
  const double e0 = std::abs(rec.front().energy.total);
  double increase = r.ok ? 0.0 : 1.0;
  for (std::size_t i = 1; i < rec.size(); ++i)
    increase = std::max(increase, (rec[i].energy.total - rec[i - 1].energy.total) / e0);
  out.push_back({"energy", "five_branch_energy_monotone", r.ok && increase <= 1e-10, increase, 1e-10});
  out.push_back({"energy", "five_branch_mass_drift", r.ok && r.max_mass_drift <= 1e-11, r.max_mass_drift, 1e-11});
  out.push_back({"energy", "five_branch_positivity", r.ok && r.min_rho > 0.0, r.min_rho, 0.0});
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite, int trials) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "operators" && suite != "pb" && suite != "energy")
    throw InputError("unknown suite '" + suite + "' (expected operators, pb, energy or all)");
  if (all || suite == "operators") operators_suite(out, trials);
  if (all || suite == "pb") pb_suite(out, trials);
  if (all || suite == "energy") energy_suite(out);
  return out;
}

bool report(std::ostream& os, const std::vector<CheckResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    os << nlohmann::json{{"suite", r.suite}, {"check", r.name}, {"pass", r.pass}, {"value", r.value},
                         {"tolerance", r.tolerance}}
              .dump()
       << '\n';
  }
  return ok;
}

}  // namespace qnepb
