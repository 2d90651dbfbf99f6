#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "qnepb/runner.hpp"
#include "qnepb/verify.hpp"

using namespace qnepb;

TEST_CASE("doubles round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv round trip") {
  CsvTable t;
  t.header = {"x", "rho"};
  t.rows = {{0.1, 1.0 / 3.0}, {0.2, std::exp(1.0)}};
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable r = read_csv(ss);
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
  CHECK(r.values("rho")[1] == std::exp(1.0));
  CHECK_THROWS(r.column("phi"));
}

TEST_CASE("vtk output names the fields") {
  const MacMesh m = build_mesh(2, DomainBounds{}, {3, 2});
  State s;
  s.rho = m.cell_field(1.0);
  s.u = m.face_field(0.0);
  s.phi = m.cell_field(0.0);
  std::ostringstream os;
  write_vtk(os, s, m, "test");
  const std::string out = os.str();
  CHECK(out.find("RECTILINEAR_GRID") != std::string::npos);
  CHECK(out.find("SCALARS rho") != std::string::npos);
  CHECK(out.find("SCALARS phi") != std::string::npos);
}

TEST_CASE("case registry") {
  for (const std::string& n : case_names()) {
    const CaseSpec c = get_case(n);
    CHECK(c.name == n);
    CHECK(case_from_json(to_json(c)) == c);
    CHECK_NOTHROW(case_config(c).validate(c.dimension));
  }
  CHECK_THROWS_AS(get_case("nope"), InputError);
}

TEST_CASE("case parameters") {
  const CaseSpec r = get_case("riemann");
  CHECK(r.param("n_r") == 0.5);
  CHECK_THROWS_AS(r.param("missing"), InputError);
  CHECK(reference_from_string(to_string(Reference::ice_exact)) == Reference::ice_exact);
}

TEST_CASE("initial data of the five-branch case") {
  const CaseSpec c = get_case("five_branch");
  const InitialData d = initial_data(c);
  const double pi = 3.14159265358979323846;
  CHECK(d.rho(pi, 0.0) == doctest::Approx(1.0 / pi));
  CHECK(d.u[0](pi / 2.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("run lands on snapshot times and writes output") {
  const auto dir = std::filesystem::temp_directory_path() / "qnepb_unit_run";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.spec = get_case("five_branch");
  cfg.spec.cells = {40, 1};
  cfg.spec.t_final = 0.05;
  cfg.spec.snapshots = {0.02};
  cfg.out_dir = dir.string();
  const RunResult r = run(cfg);
  REQUIRE(r.ok);
  CHECK(r.state.t == doctest::Approx(0.05).epsilon(1e-14));
  bool hit = false;
  for (const auto& rec : r.series.records()) hit = hit || std::abs(rec.t - 0.02) < 1e-14;
  CHECK(hit);
  CHECK(r.max_mass_drift < 1e-12);
  CHECK(!r.files.empty());
  for (const auto& f : r.files) CHECK(std::filesystem::exists(f));
  const CsvTable t = result_table_1d(r);
  CHECK(t.values("rho").size() == 40);
  std::filesystem::remove_all(dir);
}

TEST_CASE("all schemes run the riemann problem briefly") {
  for (SchemeKind k : {SchemeKind::ap, SchemeKind::rusanov, SchemeKind::ice}) {
    RunConfig cfg;
    cfg.spec = get_case("riemann");
    cfg.spec.cells = {200, 1};
    cfg.spec.t_final = 0.5;
    cfg.spec.snapshots.clear();
    cfg.scheme = k;
    const RunResult r = run(cfg);
    CHECK(r.ok);
    CHECK(r.min_rho > 0.0);
    CHECK(r.max_mass_drift < 1e-10);
  }
  CHECK(scheme_from_string(to_string(SchemeKind::ice)) == SchemeKind::ice);
  CHECK_THROWS_AS(scheme_from_string("weno"), InputError);
}

TEST_CASE("verification suites pass") {
  for (const char* suite : {"operators", "pb"}) {
    const auto res = run_suite(suite, 3);
    CHECK(!res.empty());
    for (const auto& c : res) CHECK_MESSAGE(c.pass, c.suite << "/" << c.name);
  }
  CHECK_THROWS_AS(run_suite("bogus"), InputError);
}
