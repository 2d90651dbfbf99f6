// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qnepb/analytic.hpp"
#include "qnepb/runner.hpp"

using namespace qnepb;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

MacMesh random_mesh(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> n(3, 16);
  std::uniform_real_distribution<double> w(0.25, 2.0);
  auto coords = [&] {
    std::vector<double> c{0.0};
    const int cells = n(rng);
    for (int i = 0; i < cells; ++i) c.push_back(c.back() + w(rng));
    return c;
  };
  if (dim == 1) return build_mesh(coords());
  auto x = coords();
  return build_mesh(x, coords());
}

PrimalField uniform_cells(std::mt19937_64& rng, const MacMesh& mesh, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  PrimalField q = mesh.cell_field();
  for (double& v : q) v = d(rng);
  return q;
}

FaceField uniform_faces(std::mt19937_64& rng, const MacMesh& mesh, double lo, double hi) {
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

RunResult run_case(CaseSpec spec, SchemeKind scheme = SchemeKind::ap) {
  RunConfig cfg;
  cfg.spec = std::move(spec);
  cfg.scheme = scheme;
  return run(cfg);
}

std::string run_label(const RunResult& r, const std::string& name) {
  return name + (r.ok ? "" : " failed at t=" + fmt(r.state.t) + " (" + r.error + ")");
}

// ---------------------------------------------------------------------------

Verdict operator_identities() {
  Verdict v;
  std::mt19937_64 rng(101);
  for (int dim = 1; dim <= 2; ++dim) {
    double duality = 0.0, balance = 0.0;
    for (int t = 0; t < 100; ++t) {
      const MacMesh mesh = random_mesh(rng, dim);
      const PrimalField q = uniform_cells(rng, mesh, -1.0, 1.0);
      const FaceField u = uniform_faces(rng, mesh, -1.0, 1.0);
      // relative to the magnitude of either side of the identity
      double scale = 0.0;
      const PrimalField div = divergence(u, mesh);
      for (int k = 0; k < mesh.num_cells(); ++k) scale += mesh.volume(k) * std::abs(q[k] * div[k]);
      duality = std::max(duality, std::abs(duality_residual(q, u, mesh)) / scale);

      const PrimalField rho = uniform_cells(rng, mesh, 0.5, 2.0);
      const FaceField F = uniform_faces(rng, mesh, -0.2, 0.2);
      const double dt = 0.05;
      const PrimalField rho1 = flux_balance_update(rho, F, dt, mesh);
      const FaceField rd = dual_average(rho, mesh);
      for (int a = 0; a < dim; ++a) {
        const auto res = dual_mass_balance_residual(rho, rho1, F, dt, mesh, a);
        for (int f = 0; f < mesh.num_faces(a); ++f) {
          const double ref = mesh.dual_volume(a, f) * rd[a][f] / dt;
          balance = std::max(balance, std::abs(res[f]) / ref);
        }
      }
    }
    const std::string d = std::to_string(dim) + "D";
    v.require(duality <= 1e-12, d + " duality " + fmt(duality));
    v.require(balance <= 1e-12, d + " dual balance " + fmt(balance));
  }
  return v;
}

Verdict poisson_boltzmann_suite() {
  Verdict v;
  std::mt19937_64 rng(202);
  const VariableBc neumann = VariableBc::all(BcKind::neumann_zero);
  double constant = 0.0, comparison = 0.0, bounds = 0.0, agreement = 0.0;

  for (int t = 0; t < 20; ++t) {
    const MacMesh mesh = random_mesh(rng, 1 + t % 2);
    const double c = std::uniform_real_distribution<double>(0.05, 20.0)(rng);
    const double eps = std::uniform_real_distribution<double>(1e-3, 1.0)(rng);
    const PbSolution s = solve_pb({mesh, mesh.face_field(eps * eps), mesh.cell_field(c), neumann});
    for (double p : s.phi) constant = std::max(constant, std::abs(p - std::log(c)));
  }

  auto check_bounds = [&](const PrimalField& r, const PrimalField& phi) {
    const double lo = std::log(*std::min_element(r.begin(), r.end()));
    const double hi = std::log(*std::max_element(r.begin(), r.end()));
    for (double p : phi) bounds = std::max({bounds, lo - p, p - hi});
  };

  for (int t = 0; t < 100; ++t) {
    const MacMesh mesh = random_mesh(rng, 1 + t % 2);
    const double eps = std::uniform_real_distribution<double>(1e-2, 1.0)(rng);
    const FaceField c = mesh.face_field(eps * eps);
    const PrimalField r1 = uniform_cells(rng, mesh, 0.05, 5.0);
    PrimalField r2 = r1;
    std::uniform_real_distribution<double> bump(0.0, 2.0);
    for (double& x : r2) x += bump(rng);
    const PrimalField p1 = solve_pb({mesh, c, r1, neumann}).phi;
    const PrimalField p2 = solve_pb({mesh, c, r2, neumann}).phi;
    for (std::size_t k = 0; k < p1.size(); ++k) comparison = std::max(comparison, p1[k] - p2[k]);
    check_bounds(r1, p1);
    check_bounds(r2, p2);
  }

  // Newton against Picard on the five-branch initial density
  for (double eps : {1.0, 1e-2}) {
    CaseSpec spec = get_case("five_branch");
    const MacMesh mesh = case_mesh(spec);
    spec.eps = eps;
    const State s0 = project_initial(initial_data(spec), mesh, case_config(spec));
    EllipticProblem p{mesh, mesh.face_field(eps * eps), s0.rho, neumann};
    p.tol.picard_tol = 1e-14;
    p.tol.max_picard = 20000;
    const PrimalField newton = solve_pb(p).phi;
    const PrimalField picard = picard_solve(p).phi;
    for (std::size_t k = 0; k < newton.size(); ++k) agreement = std::max(agreement, std::abs(newton[k] - picard[k]));
    check_bounds(s0.rho, newton);
  }

  v.require(constant <= 1e-10, "constant " + fmt(constant));
  v.require(comparison <= 0.0, "comparison max(phi1-phi2) " + fmt(comparison));
  v.require(bounds <= 1e-12, "bounds violation " + fmt(bounds));
  v.require(agreement <= 1e-8, "newton/picard " + fmt(agreement));
  return v;
}

Verdict conservation_positivity() {
  Verdict v;
  struct Item {
    std::string label;
    CaseSpec spec;
  };
  std::vector<Item> items;
  for (double eps : {1.0, 1e-2}) {
    CaseSpec c = get_case("five_branch");
    c.eps = eps;
    items.push_back({"five_branch eps=" + fmt(eps), c});
  }
  {
    CaseSpec c = get_case("shock_tube");
    items.push_back({"shock_tube eps=1e-2", c});
    c.eps = 1e-4;
    c.cells = {1000, 1};
    c.t_final = 0.1;
    items.push_back({"shock_tube eps=1e-4", c});
  }
  for (double nr : {0.5, 0.75, 0.95}) {
    CaseSpec c = get_case("riemann");
    c.params["n_r"] = nr;
    items.push_back({"riemann n_r=" + fmt(nr), c});
  }
  {
    CaseSpec c = get_case("plasma_expansion");
    c.cells = {2000, 1};
    items.push_back({"plasma_expansion 2000", c});
  }
  for (auto& it : items) {
    const RunResult r = run_case(it.spec);
    v.require(r.ok && r.max_mass_drift <= 1e-11 && r.min_rho > 0.0,
              run_label(r, it.label) + " drift " + fmt(r.max_mass_drift) + " min rho " + fmt(r.min_rho));
  }
  return v;
}

Verdict energy_stability() {
  Verdict v;
  auto monotone = [&](const CaseSpec& spec, const std::string& label) {
    const RunResult r = run_case(spec);
    const auto& rec = r.series.records();
    const double e0 = std::abs(rec.front().energy.total);
    double worst = 0.0;
    for (std::size_t i = 1; i < rec.size(); ++i)
      worst = std::max(worst, (rec[i].energy.total - rec[i - 1].energy.total) / e0);
    v.require(r.ok && worst <= 1e-10, run_label(r, label) + " max increase " + fmt(worst) + " E0");
  };
  for (double eps : {1.0, 1e-2}) {
    CaseSpec c = get_case("five_branch");
    c.eps = eps;
    monotone(c, "five_branch eps=" + fmt(eps));
  }
  CaseSpec c = get_case("shock_tube");
  c.eps = 1e-4;
  c.cells = {1000, 1};
  c.t_final = 0.1;
  c.bc.density = VariableBc::all(BcKind::neumann_zero);
  c.bc.velocity = VariableBc::all(BcKind::no_slip);
  c.bc.potential = VariableBc::all(BcKind::neumann_zero);
  monotone(c, "closed shock_tube eps=1e-4");
  return v;
}

Verdict quasineutral_limit() {
  Verdict v;
  auto five = [](double eps, SchemeKind scheme) {
    CaseSpec c = get_case("five_branch");
    c.eps = eps;
    return run_case(c, scheme);
  };
  const RunResult a = five(1e-2, SchemeKind::ap);
  const RunResult b = five(1e-3, SchemeKind::ap);
  if (a.ok && b.ok) {
    const double ra = quasineutrality_residual(a.state), rb = quasineutrality_residual(b.state);
    const double slope = std::log10(ra / rb);
    v.require(std::abs(slope - 2.0) <= 0.3,
              "residual " + fmt(ra) + " -> " + fmt(rb) + ", slope " + fmt(slope));
  } else {
    v.require(false, run_label(a.ok ? b : a, "five_branch"));
  }

  const RunResult ap = five(1e-8, SchemeKind::ap);
  const RunResult ice = five(0.0, SchemeKind::ice);
  if (ap.ok && ice.ok) {
    const double d = l1_difference(ap.state.rho, ice.state.rho, ap.mesh);
    v.require(d <= 1e-3, "L1(ap eps=1e-8, limit) " + fmt(d));
  } else {
    v.require(false, run_label(ap.ok ? ice : ap, "five_branch limit"));
  }
  return v;
}

Verdict riemann_vs_exact() {
  Verdict v;
  for (double nr : {0.5, 0.75, 0.95}) {
    CaseSpec c = get_case("riemann");
    c.params["n_r"] = nr;
    c.cells = {2000, 1};
    const RunResult r = run_case(c);
    if (!r.ok) {
      v.require(false, run_label(r, "riemann"));
      continue;
    }
    const RiemannIceSolution ex(nr);
    const MacMesh& m = r.mesh;
    const double T = c.t_final;
    double err = 0.0, norm = 0.0;
    std::vector<double> x(m.nx());
    for (int k = 0; k < m.nx(); ++k) {
      x[k] = m.cell_center(0, k);
      const double e = ex.at(T, x[k]).rho;
      err += m.volume(k) * std::abs(r.state.rho[k] - e);
      norm += m.volume(k) * e;
    }
    // shock: last crossing of the level halfway between plateau and right state
    const double level = 0.5 * (std::exp(-ex.u_m) + nr);
    double xs = NAN;
    for (int k = m.nx() - 2; k >= 0; --k) {
      const double a = r.state.rho[k] - level, b = r.state.rho[k + 1] - level;
      if (a * b <= 0.0 && a != b) {
        xs = x[k] + a / (a - b) * (x[k + 1] - x[k]);
        break;
      }
    }
    const double h = m.width(0, 0);
    const double off = (xs - ex.u_s * T) / h;
    v.require(err / norm <= 0.05 && std::abs(off) <= 3.0,
              "n_r=" + fmt(nr) + " rel L1 " + fmt(err / norm) + " shock offset " + fmt(off) + " cells");
  }
  return v;
}

double sheath_edge_of(const RunResult& r) {
  const MacMesh& m = r.mesh;
  std::vector<double> x(m.nx());
  for (int k = 0; k < m.nx(); ++k) x[k] = m.cell_center(0, k);
  return sheath_edge(x, r.state.rho, r.state.rho.front());
}

Verdict child_langmuir_sheath() {
  Verdict v;
  const CaseSpec base = get_case("sheath_1d");
  const double target = child_langmuir(-base.param("phi_extractor"), base.param("u_inlet"), base.eps);
  const RunResult r500 = run_case(base);
  if (!r500.ok) {
    v.require(false, run_label(r500, "sheath_1d 500 cells"));
    return v;
  }
  const double s500 = 1.0 - sheath_edge_of(r500);
  v.require(std::abs(s500 - target) <= 0.1, "s(500) " + fmt(s500) + " vs " + fmt(target));
  CaseSpec fine = base;
  fine.cells = {1000, 1};
  const RunResult r1000 = run_case(fine);
  if (!r1000.ok) {
    v.require(false, run_label(r1000, "sheath_1d 1000 cells"));
    return v;
  }
  const double s1000 = 1.0 - sheath_edge_of(r1000);
  v.require(std::abs(s1000 - s500) <= 0.02, "grid change " + fmt(std::abs(s1000 - s500)));
  return v;
}

Verdict cylindrical_explosion() {
  Verdict v;
  CaseSpec c = get_case("cylindrical_explosion");
  c.cells = {100, 100};
  const RunResult ap = run_case(c);
  const RunResult ice = run_case(c, SchemeKind::ice);
  if (!ap.ok || !ice.ok) {
    v.require(false, run_label(ap.ok ? ice : ap, "cylindrical_explosion"));
    return v;
  }
  const auto cx = axis_cut(ap.state, ap.mesh, 0).values("rho");
  const auto cy = axis_cut(ap.state, ap.mesh, 1).values("rho");
  double dev = 0.0;
  for (std::size_t i = 0; i < cx.size(); ++i) dev = std::max(dev, std::abs(cx[i] - cy[i]));
  dev /= max_abs(cx);
  v.require(dev <= 0.02, "axis asymmetry " + fmt(dev));

  const CsvTable ra = radial_cut(ap.state, ap.mesh), ri = radial_cut(ice.state, ice.mesh);
  const auto r = ra.values("r"), pa = ra.values("rho"), pi = ri.values("rho");
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double dr = i + 1 < r.size() ? r[i + 1] - r[i] : r[i] - r[i - 1];
    err += dr * std::abs(pa[i] - pi[i]);
    norm += dr * std::abs(pi[i]);
  }
  v.require(err / norm <= 0.05, "radial rel L1 vs limit scheme " + fmt(err / norm));
  return v;
}

Verdict shock_tube_dispersive() {
  Verdict v;
  const CaseSpec c = get_case("shock_tube");
  const RunResult r = run_case(c);
  if (!r.ok) {
    v.require(false, run_label(r, "shock_tube eps=1e-2"));
    return v;
  }
  const PrimalField& rho = r.state.rho;
  int extrema = 0;
  for (std::size_t k = 1; k + 1 < rho.size(); ++k)
    if ((rho[k] - rho[k - 1]) * (rho[k + 1] - rho[k]) < 0.0) ++extrema;
  v.require(extrema >= 3, std::to_string(extrema) + " local extrema");

  CaseSpec fine = c;
  fine.cells = {500, 1};
  const RunResult ref = run_case(fine, SchemeKind::rusanov);
  if (!ref.ok) {
    v.require(false, run_label(ref, "rusanov reference"));
    return v;
  }
  const int ratio = fine.cells[0] / c.cells[0];
  double err = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    double avg = 0.0;
    for (int j = 0; j < ratio; ++j) avg += ref.state.rho[k * ratio + j];
    avg /= ratio;
    err += std::abs(rho[k] - avg);
    norm += std::abs(avg);
  }
  v.require(err / norm <= 0.1, "rel L1 vs fine Rusanov " + fmt(err / norm));
  return v;
}

Verdict limit_scheme_consistency() {
  Verdict v;
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int dim = 1 + t % 2;
    const MacMesh mesh = random_mesh(rng, dim);
    SchemeConfig cfg;
    cfg.eps = 0.0;
    cfg.bc.density = VariableBc::all(BcKind::neumann_zero);
    cfg.bc.velocity = VariableBc::all(BcKind::no_slip);
    cfg.bc.potential = VariableBc::all(BcKind::neumann_zero);
    cfg.validate(dim, true);
    State s;
    s.rho = uniform_cells(rng, mesh, 0.5, 2.0);
    s.u = uniform_faces(rng, mesh, -0.5, 0.5);
    apply_velocity_bc(s.u, mesh, cfg.bc.velocity);
    s.phi = s.rho;
    for (double& p : s.phi) p = std::log(p);
    const double dt = compute_dt(s, mesh, cfg);
    const State a = advance(mesh, s, dt, cfg);
    const IceState b = ice_step(mesh, ice_from_state(s), dt, cfg);
    for (int k = 0; k < mesh.num_cells(); ++k) worst = std::max(worst, std::abs(a.rho[k] - b.rho[k]));
    for (int ax = 0; ax < dim; ++ax)
      for (int f = 0; f < mesh.num_faces(ax); ++f) worst = std::max(worst, std::abs(a.u[ax][f] - b.u[ax][f]));
  }
  v.require(worst <= 1e-12, "max |ap - limit| " + fmt(worst));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"operator identities", operator_identities},
      {"Poisson-Boltzmann suite", poisson_boltzmann_suite},
      {"conservation and positivity", conservation_positivity},
      {"energy stability", energy_stability},
      {"quasineutral limit", quasineutral_limit},
      {"Riemann problem vs exact limit solution", riemann_vs_exact},
      {"Child-Langmuir sheath", child_langmuir_sheath},
      {"cylindrical explosion", cylindrical_explosion},
      {"dispersive shock tube", shock_tube_dispersive},
      {"limit-scheme consistency", limit_scheme_consistency},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("%s %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
