#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qnepb/diagnostics.hpp"

using namespace qnepb;

namespace {

State rest_state(const MacMesh& m) {
  State s;
  s.rho = m.cell_field(1.0);
  s.u = m.face_field(0.0);
  s.phi = m.cell_field(0.0);
  return s;
}

}  // namespace

TEST_CASE("energy of the neutral rest state") {
  const MacMesh m = build_mesh(2, DomainBounds{{0.0, 0.0}, {2.0, 3.0}}, {4, 6});
  const EnergyBreakdown e = total_energy(rest_state(m), m, 0.1);
  CHECK(e.kinetic == 0.0);
  CHECK(e.field == 0.0);
  CHECK(e.boltzmann == doctest::Approx(-6.0));
  CHECK(e.total == doctest::Approx(-6.0));
}

TEST_CASE("kinetic energy is quadratic in velocity") {
  const MacMesh m = build_mesh(1, DomainBounds{}, {8, 1});
  State s = rest_state(m);
  for (int f = 1; f < 8; ++f) s.u[0][f] = 0.1 * f;
  const double k1 = total_energy(s, m, 1.0).kinetic;
  for (auto& v : s.u[0]) v *= 2.0;
  CHECK(total_energy(s, m, 1.0).kinetic == doctest::Approx(4.0 * k1));
}

TEST_CASE("quasineutrality residual") {
  const MacMesh m = build_mesh(1, DomainBounds{}, {3, 1});
  State s = rest_state(m);
  s.phi = {0.2, -0.3, 1.0};
  s.rho = {std::exp(0.2), std::exp(-0.3), std::exp(1.0)};
  CHECK(quasineutrality_residual(s) == doctest::Approx(0.0));
  s.rho[1] += 0.25;
  CHECK(quasineutrality_residual(s) == doctest::Approx(0.25));
}

TEST_CASE("sheath edge") {
  std::vector<double> x;
  PrimalField rho;
  for (int i = 0; i <= 1000; ++i) {
    x.push_back(i * 1e-3);
    rho.push_back(x.back() < 0.6 ? 5.0 : 0.1);
  }
  CHECK(sheath_edge(x, rho, 5.0) == doctest::Approx(0.6).epsilon(2e-3));
  const std::vector<double> xr{0.0, 1.0, 2.0, 3.0};
  CHECK(sheath_edge(xr, {4.0, 3.0, 1.0, 0.0}, 4.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(sheath_edge(xr, {0.1, 0.1, 0.1, 0.1}, 4.0), InputError);
}

TEST_CASE("potential remainder is non-negative") {
  const MacMesh m = build_mesh(1, DomainBounds{}, {5, 1});
  const PrimalField r = potential_remainder({0.0, 0.5, -1.0, 2.0, 0.1}, {0.3, -0.5, -1.0, 0.0, 0.2}, m, 0.1, 0.01);
  for (double v : r) CHECK(v >= -1e-15);
}

TEST_CASE("l1 norms") {
  const MacMesh m = build_mesh({0.0, 0.5, 2.0});
  CHECK(l1_difference({1.0, 2.0}, {0.0, 0.0}, m) == doctest::Approx(3.5));
  CHECK(l1_norm({-1.0, 2.0}, m) == doctest::Approx(3.5));
  CHECK(total_mass({1.0, 2.0}, m) == doctest::Approx(3.5));
}

TEST_CASE("diagnostic series") {
  DiagSeries d;
  DiagRecord r;
  r.t = 0.0;
  d.append(r);
  CHECK_THROWS(d.append(r));
  r.t = 0.5;
  d.append(r);
  std::ostringstream os;
  d.write_csv(os);
  CHECK(os.str().rfind(DiagSeries::kHeader, 0) == 0);
  CHECK(d.records().size() == 2);
}
