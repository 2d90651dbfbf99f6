#include "qnepb/bench.hpp"

#include <cmath>
#include <numbers>

namespace qnepb {

using nlohmann::json;

std::string to_string(Reference r) {
  switch (r) {
    case Reference::none: return "none";
    case Reference::rusanov_fine: return "rusanov-fine";
    case Reference::ice_exact: return "ice-exact";
    case Reference::ice_scheme: return "ice-scheme";
  }
  return "none";
}

Reference reference_from_string(const std::string& s) {
  if (s == "none") return Reference::none;
  if (s == "rusanov-fine") return Reference::rusanov_fine;
  if (s == "ice-exact") return Reference::ice_exact;
  if (s == "ice-scheme") return Reference::ice_scheme;
  throw InputError("unknown reference recipe '" + s + "'");
}

double CaseSpec::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw InputError("case '" + name + "' has no parameter '" + key + "'");
  return it->second;
}

namespace {

SideBc side(BcKind k, double v = 0.0) { return SideBc{k, v}; }

VariableBc sides_1d(SideBc left, SideBc right) {
  VariableBc v;
  v[Side::xmin] = left;
  v[Side::xmax] = right;
  return v;
}

CaseSpec five_branch() {
  CaseSpec c;
  c.name = "five_branch";
  c.bounds = {{0.0, 0.0}, {2.0 * std::numbers::pi, 1.0}};
  c.cells = {100, 1};
  c.eps = 1.0;
  c.t_final = 1.0;
  c.bc.density = VariableBc::all(BcKind::neumann_zero);
  c.bc.velocity = VariableBc::all(BcKind::neumann_zero);
  c.bc.potential = sides_1d(side(BcKind::periodic), side(BcKind::periodic));
  c.reference = Reference::rusanov_fine;
  return c;
}

CaseSpec shock_tube() {
  CaseSpec c;
  c.name = "shock_tube";
  c.bounds = {{-0.2, 0.0}, {0.2, 1.0}};
  c.cells = {100, 1};
  c.eps = 1e-2;
  c.t_final = 0.2;
  c.bc.density = VariableBc::all(BcKind::extrapolate);
  c.bc.velocity = VariableBc::all(BcKind::extrapolate);
  c.bc.potential = sides_1d(side(BcKind::periodic), side(BcKind::periodic));
  c.reference = Reference::rusanov_fine;
  // left-state velocity; the right state is -u_left
  c.params = {{"u_left", -1.0}};
  return c;
}

CaseSpec plasma_expansion() {
  CaseSpec c;
  c.name = "plasma_expansion";
  c.bounds = {{-10.0, 0.0}, {40.0, 1.0}};
  c.cells = {10000, 1};
  c.eps = 1e-2;
  c.t_final = 8.0;
  c.snapshots = {2.0, 4.0, 6.0};
  c.bc.density = VariableBc::all(BcKind::neumann_zero);
  c.bc.velocity = sides_1d(side(BcKind::no_slip), side(BcKind::neumann_zero));
  c.bc.potential = VariableBc::all(BcKind::neumann_zero);
  return c;
}

CaseSpec riemann() {
  CaseSpec c;
  c.name = "riemann";
  c.bounds = {{-80.0, 0.0}, {100.0, 1.0}};
  c.cells = {9000, 1};
  c.eps = 1e-4;
  c.t_final = 50.0;
  c.params = {{"n_r", 0.5}};
  c.bc.density = VariableBc::all(BcKind::extrapolate);
  c.bc.velocity = VariableBc::all(BcKind::no_slip);
  c.bc.potential = VariableBc::all(BcKind::neumann_zero);
  c.reference = Reference::ice_exact;
  return c;
}

CaseSpec cylindrical_explosion() {
  CaseSpec c;
  c.name = "cylindrical_explosion";
  c.dimension = 2;
  c.bounds = {{-1.0, -1.0}, {1.0, 1.0}};
  c.cells = {200, 200};
  c.eps = 1e-4;
  c.t_final = 0.2;
  c.bc.density = VariableBc::all(BcKind::neumann_zero);
  c.bc.velocity = VariableBc::all(BcKind::no_slip);
  c.bc.potential = VariableBc::all(BcKind::neumann_zero);
  c.reference = Reference::ice_scheme;
  c.radial_cut = true;
  return c;
}

CaseSpec sheath_1d() {
  CaseSpec c;
  c.name = "sheath_1d";
  c.bounds = {{0.0, 0.0}, {1.0, 1.0}};
  c.cells = {500, 1};
  c.eps = 1e-2;
  c.t_final = 2.5;
  c.params = {{"rho_inlet", 5.0}, {"u_inlet", 1.25}, {"rho_floor", 1e-5}, {"phi_extractor", -500.0}};
  c.bc.density = sides_1d(side(BcKind::dirichlet, 5.0), side(BcKind::extrapolate));
  c.bc.velocity = sides_1d(side(BcKind::dirichlet, 1.25), side(BcKind::extrapolate));
  c.bc.potential = sides_1d(side(BcKind::neumann_zero), side(BcKind::dirichlet, -500.0));
  return c;
}

CaseSpec ion_extraction_2d() {
  CaseSpec c;
  c.name = "ion_extraction_2d";
  c.dimension = 2;
  c.bounds = {{0.0, 0.0}, {1.0, 2.5}};
  c.cells = {80, 200};
  c.eps = 0.18e-2;
  c.t_final = 0.5;
  c.snapshots = {0.1, 0.3};
  c.params = {{"rho_plasma", 5.0}, {"rho_floor", 1e-5}, {"plasma_width", 0.75}, {"plasma_bottom", 0.75},
              {"plasma_top", 1.75}, {"v_drift", 0.25}};
  c.bc.density = VariableBc::all(BcKind::extrapolate);
  c.bc.velocity = VariableBc::all(BcKind::extrapolate);
  c.bc.velocity[Side::xmin] = side(BcKind::no_slip);
  c.bc.potential[Side::xmin] = side(BcKind::neumann_zero);
  c.bc.potential[Side::xmax] = side(BcKind::dirichlet, -1000.0);
  c.bc.potential[Side::ymin] = side(BcKind::dirichlet, -10.0);
  c.bc.potential[Side::ymax] = side(BcKind::dirichlet, -10.0);
  return c;
}

}  // namespace

std::vector<std::string> case_names() {
  return {"five_branch", "shock_tube", "plasma_expansion", "riemann", "cylindrical_explosion", "sheath_1d",
          "ion_extraction_2d"};
}

CaseSpec get_case(const std::string& name) {
  if (name == "five_branch") return five_branch();
  if (name == "shock_tube") return shock_tube();
  if (name == "plasma_expansion") return plasma_expansion();
  if (name == "riemann") return riemann();
  if (name == "cylindrical_explosion") return cylindrical_explosion();
  if (name == "sheath_1d") return sheath_1d();
  if (name == "ion_extraction_2d") return ion_extraction_2d();
  throw InputError("unknown case '" + name + "'");
}

InitialData initial_data(const CaseSpec& c) {
  InitialData d;
  const std::string& n = c.name;
  if (n == "five_branch") {
    d.rho = [](double x, double) { return std::exp(-(x - std::numbers::pi) * (x - std::numbers::pi)) / std::numbers::pi; };
    d.u[0] = [](double x, double) { return std::pow(std::sin(x), 3); };
  } else if (n == "shock_tube") {
    d.rho = [](double, double) { return 1.0; };
    const double ul = c.param("u_left");
    d.u[0] = [ul](double x, double) { return x < 0.0 ? ul : -ul; };
  } else if (n == "plasma_expansion") {
    d.rho = [](double x, double) { return 0.5 - std::atan(std::numbers::pi * x) / std::numbers::pi; };
  } else if (n == "riemann") {
    const double nr = c.param("n_r");
    if (!(nr > 0.0 && nr <= 1.0)) throw InputError("riemann: n_r must lie in (0, 1]");
    d.rho = [nr](double x, double) { return x < 0.0 ? 1.0 : nr; };
  } else if (n == "cylindrical_explosion") {
    d.rho = [](double x, double y) { return std::hypot(x, y) <= 0.5 ? 1.0 : 0.1; };
  } else if (n == "sheath_1d") {
    const double floor = c.param("rho_floor"), u0 = c.param("u_inlet");
    d.rho = [floor](double, double) { return floor; };
    d.u[0] = [u0](double, double) { return u0; };
  } else if (n == "ion_extraction_2d") {
    const double rp = c.param("rho_plasma"), floor = c.param("rho_floor"), w = c.param("plasma_width");
    const double yb = c.param("plasma_bottom"), yt = c.param("plasma_top"), v = c.param("v_drift");
    d.rho = [=](double x, double y) { return x <= w && y >= yb && y <= yt ? rp : floor; };
    d.u[1] = [v](double, double) { return v; };
  } else {
    throw InputError("no initial data for case '" + n + "'");
  }
  return d;
}

MacMesh case_mesh(const CaseSpec& c) { return build_mesh(c.dimension, c.bounds, c.cells); }

SchemeConfig case_config(const CaseSpec& c) {
  SchemeConfig cfg;
  cfg.eps = c.eps;
  cfg.gamma = c.gamma;
  cfg.cfl = c.cfl;
  cfg.bc = c.bc;
  return cfg;
}

json to_json(const BoundarySpec& b) {
  auto var = [](const VariableBc& v) {
    json j = json::object();
    const char* names[] = {"xmin", "xmax", "ymin", "ymax"};
    for (int s = 0; s < 4; ++s) j[names[s]] = {{"kind", to_string(v.side[s].kind)}, {"value", v.side[s].value}};
    return j;
  };
  return {{"density", var(b.density)}, {"velocity", var(b.velocity)}, {"potential", var(b.potential)}};
}

BoundarySpec boundary_from_json(const json& j) {
  auto var = [](const json& jv) {
    VariableBc v;
    const char* names[] = {"xmin", "xmax", "ymin", "ymax"};
    for (int s = 0; s < 4; ++s) {
      if (!jv.contains(names[s])) continue;
      const json& e = jv.at(names[s]);
      v.side[s].kind = bc_kind_from_string(e.at("kind").get<std::string>());
      v.side[s].value = e.value("value", 0.0);
    }
    return v;
  };
  BoundarySpec b;
  if (j.contains("density")) b.density = var(j.at("density"));
  if (j.contains("velocity")) b.velocity = var(j.at("velocity"));
  if (j.contains("potential")) b.potential = var(j.at("potential"));
  return b;
}

json to_json(const CaseSpec& c) {
  return {{"name", c.name},
          {"dimension", c.dimension},
          {"bounds", {{"lo", c.bounds.lo}, {"hi", c.bounds.hi}}},
          {"cells", c.cells},
          {"eps", c.eps},
          {"t_final", c.t_final},
          {"gamma", c.gamma},
          {"cfl", c.cfl},
          {"boundary", to_json(c.bc)},
          {"reference", to_string(c.reference)},
          {"snapshots", c.snapshots},
          {"params", c.params},
          {"radial_cut", c.radial_cut}};
}

CaseSpec case_from_json(const json& j) {
  try {
    CaseSpec c;
    c.name = j.at("name").get<std::string>();
    c.dimension = j.at("dimension").get<int>();
    c.bounds.lo = j.at("bounds").at("lo").get<std::array<double, 2>>();
    c.bounds.hi = j.at("bounds").at("hi").get<std::array<double, 2>>();
    c.cells = j.at("cells").get<std::array<int, 2>>();
    c.eps = j.at("eps").get<double>();
    c.t_final = j.at("t_final").get<double>();
    c.gamma = j.value("gamma", 1.01);
    c.cfl = j.value("cfl", 0.9);
    c.bc = boundary_from_json(j.at("boundary"));
    c.reference = reference_from_string(j.value("reference", std::string("none")));
    c.snapshots = j.value("snapshots", std::vector<double>{});
    c.params = j.value("params", std::map<std::string, double>{});
    c.radial_cut = j.value("radial_cut", false);
    c.bc.validate(c.dimension);
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed case description: ") + e.what());
  }
}

}  // namespace qnepb
