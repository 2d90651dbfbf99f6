#include "qnepb/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnepb/analytic.hpp"
#include "qnepb/io.hpp"

namespace qnepb {

namespace fs = std::filesystem;

std::string to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::ap: return "ap";
    case SchemeKind::rusanov: return "rusanov";
    case SchemeKind::ice: return "ice";
  }
  return "ap";
}

SchemeKind scheme_from_string(const std::string& s) {
  if (s == "ap") return SchemeKind::ap;
  if (s == "rusanov") return SchemeKind::rusanov;
  if (s == "ice") return SchemeKind::ice;
  throw InputError("unknown scheme '" + s + "' (expected ap, rusanov or ice)");
}

State to_staggered(const CollocatedState& c, const MacMesh& mesh, const VariableBc& velocity_bc) {
  State s{c.t, c.rho, mesh.face_field(), c.phi};
  for (int axis = 0; axis < mesh.dimension(); ++axis)
    for (int f = 0; f < mesh.num_faces(axis); ++f)
      if (!mesh.is_boundary(axis, f))
        s.u[axis][f] = 0.5 * (c.u[axis][mesh.minus_cell(axis, f)] + c.u[axis][mesh.plus_cell(axis, f)]);
  apply_velocity_bc(s.u, mesh, velocity_bc);
  return s;
}

namespace {

std::string time_tag(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

class Writer {
 public:
  Writer(const RunConfig& cfg, const MacMesh& mesh) : cfg_(cfg), mesh_(mesh) {
    if (cfg.out_dir.empty()) return;
    fs::create_directories(cfg.out_dir);
    format_ = cfg.format == "auto" ? (mesh.dimension() == 1 ? "csv" : "vtk") : cfg.format;
    if (format_ != "csv" && format_ != "vtk") throw InputError("unknown output format '" + cfg.format + "'");
  }

  bool active() const { return !cfg_.out_dir.empty(); }

  void snapshot(const RunResult& r, std::vector<std::string>& files) {
    if (!active()) return;
    const double t = r.state.t;
    const std::string stem = (fs::path(cfg_.out_dir) / ("fields_t" + time_tag(t))).string();
    if (mesh_.dimension() == 1 || format_ == "csv") {
      CsvTable table = mesh_.dimension() == 1 ? result_table_1d(r) : table_2d(r.state);
      if (mesh_.dimension() == 1 && cfg_.spec.reference == Reference::ice_exact && t > 0.0) {
        const RiemannIceSolution exact(cfg_.spec.param("n_r"));
        std::vector<double> re, ue;
        for (double x : table.values("x")) {
          const auto p = exact.at(t, x);
          re.push_back(p.rho);
          ue.push_back(p.u);
        }
        table.add_column("rho_exact", re);
        table.add_column("u_exact", ue);
      }
      write_csv_file(stem + ".csv", table);
      files.push_back(stem + ".csv");
    } else {
      std::ofstream os(stem + ".vtk");
      if (!os) throw std::runtime_error("cannot open '" + stem + ".vtk'");
      write_vtk(os, r.state, mesh_, cfg_.spec.name + " t=" + time_tag(t));
      files.push_back(stem + ".vtk");
    }
    if (mesh_.dimension() == 2 && cfg_.spec.radial_cut) {
      const bool final = t >= cfg_.spec.t_final;
      const std::string name = final ? "radial_cut.csv" : "radial_cut_t" + time_tag(t) + ".csv";
      const std::string path = (fs::path(cfg_.out_dir) / name).string();
      write_csv_file(path, radial_cut(r.state, mesh_));
      files.push_back(path);
    }
  }

  void finish(const RunResult& r, std::vector<std::string>& files) {
    if (!active()) return;
    const std::string diag = (fs::path(cfg_.out_dir) / "diagnostics.csv").string();
    {
      std::ofstream os(diag);
      r.series.write_csv(os);
    }
    files.push_back(diag);
    nlohmann::json m = {{"status", r.ok ? "completed" : "failed"},
                        {"scheme", to_string(cfg_.scheme)},
                        {"steps", r.steps},
                        {"t_reached", r.state.t},
                        {"case", to_json(cfg_.spec)},
                        {"files", files}};
    if (!r.ok) m["error"] = r.error;
    std::ofstream os(fs::path(cfg_.out_dir) / "MANIFEST");
    os << m.dump(2) << '\n';
  }

 private:
  CsvTable table_2d(const State& s) const {
    CsvTable t;
    t.header = {"x", "y", "rho", "u", "v", "phi"};
    const PrimalField uc = cell_velocity(s.u, mesh_, 0), vc = cell_velocity(s.u, mesh_, 1);
    for (int k = 0; k < mesh_.num_cells(); ++k)
      t.rows.push_back({mesh_.cell_center(0, k), mesh_.cell_center(1, k), s.rho[k], uc[k], vc[k], s.phi[k]});
    return t;
  }

  const RunConfig& cfg_;
  const MacMesh& mesh_;
  std::string format_;
};

}  // namespace

CsvTable result_table_1d(const RunResult& r) {
  if (!r.collocated) return snapshot_table_1d(r.state, r.mesh);
  CsvTable t;
  t.header = {"x", "rho", "u", "phi"};
  const auto& c = *r.collocated;
  for (int k = 0; k < r.mesh.num_cells(); ++k) t.rows.push_back({r.mesh.cell_center(0, k), c.rho[k], c.u[0][k], c.phi[k]});
  return t;
}

RunResult run(const RunConfig& cfg) {
  const CaseSpec& spec = cfg.spec;
  if (!(spec.t_final > 0.0)) throw InputError("final time must be positive");
  RunResult r(case_mesh(spec));
  const MacMesh& mesh = r.mesh;
  SchemeConfig sc = case_config(spec);
  sc.tol = cfg.tol;
  sc.dt_max = cfg.dt_max;
  sc.validate(spec.dimension, cfg.scheme == SchemeKind::ice);
  const InitialData data = initial_data(spec);

  std::vector<double> targets;
  for (double t : spec.snapshots)
    if (t > 0.0 && t < spec.t_final) targets.push_back(t);
  targets.push_back(spec.t_final);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  Writer writer(cfg, mesh);
  State s;
  CollocatedState cs;
  IceState is;
  switch (cfg.scheme) {
    case SchemeKind::ap: s = project_initial(data, mesh, sc); break;
    case SchemeKind::ice: {
      SchemeConfig limit = sc;
      limit.eps = 0.0;
      is = ice_from_state(project_initial(data, mesh, limit));
      s = State{0.0, is.rho, is.u, is.rho};
      for (double& v : s.phi) v = std::log(v);
      break;
    }
    case SchemeKind::rusanov:
      cs = project_collocated(data, mesh, sc);
      s = to_staggered(cs, mesh, sc.bc.velocity);
      r.collocated = cs;
      break;
  }
  const double eps_diag = cfg.scheme == SchemeKind::ice ? 0.0 : sc.eps;
  const double m0 = total_mass(s.rho, mesh);
  double outflow = 0.0;
  r.series.append(make_record(s, 0.0, mesh, eps_diag, sc.bc.potential));
  r.min_rho = min_value(s.rho);
  r.state = s;

  std::size_t next = 0;
  try {
    while (next < targets.size()) {
      const double target = targets[next];
      const double limit = target - s.t;
      double dt = 0.0;
      switch (cfg.scheme) {
        case SchemeKind::ap: {
          StepDiagnostics d;
          s = step(mesh, s, sc, &d, limit);
          dt = d.dt;
          outflow += d.boundary_outflow;
          r.density_ratio_warnings += d.density_ratio_violations;
          r.retries += d.retries;
          break;
        }
        case SchemeKind::ice: {
          dt = std::min(ice_dt(is, mesh, sc), limit);
          double leaving = 0.0;
          try {
            is = ice_step(mesh, is, dt, sc, &leaving);
          } catch (const StepError&) {
            dt *= 0.5;
            ++r.retries;
            is = ice_step(mesh, is, dt, sc, &leaving);
          } catch (const PreconditionError&) {
            dt *= 0.5;
            ++r.retries;
            is = ice_step(mesh, is, dt, sc, &leaving);
          }
          outflow += leaving;
          s = State{is.t, is.rho, is.u, is.rho};
          for (double& v : s.phi) v = std::log(v);
          break;
        }
        case SchemeKind::rusanov: {
          dt = std::min(rusanov_dt(cs, mesh, sc.cfl), limit);
          double leaving = 0.0;
          cs = rusanov_step(mesh, cs, dt, sc, &leaving);
          outflow += leaving;
          s = to_staggered(cs, mesh, sc.bc.velocity);
          break;
        }
      }
      if (!(dt >= 1e-14 * spec.t_final)) throw StepError("time step underflow (dt = " + format_double(dt) + ")");
      const bool landed = dt == limit || std::abs(s.t - target) <= 1e-12 * spec.t_final;
      if (landed) {
        s.t = target;
        is.t = target;
        cs.t = target;
      }
      ++r.steps;
      r.state = s;
      if (cfg.scheme == SchemeKind::rusanov) r.collocated = cs;
      const DiagRecord rec = make_record(s, dt, mesh, eps_diag, sc.bc.potential);
      r.series.append(rec);
      r.min_rho = std::min(r.min_rho, rec.min_rho);
      r.max_mass_drift = std::max(r.max_mass_drift, std::abs(rec.mass - m0 + outflow) / m0);
      if (landed) {
        writer.snapshot(r, r.files);
        ++next;
      }
    }
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  writer.finish(r, r.files);
  return r;
}

}  // namespace qnepb
