#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnepb/runner.hpp"
#include "qnepb/verify.hpp"

using namespace qnepb;

namespace {

struct RunOptions {
  std::string case_name;
  std::optional<std::string> scheme;
  std::string config;
  std::string out = "out";
  std::string format = "auto";
  std::optional<double> eps, t_final, n_r, cfl, dt_max;
  std::vector<int> cells;
};

CaseSpec resolve_case(const RunOptions& o, SchemeKind& scheme) {
  CaseSpec spec;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw InputError("cannot open config '" + o.config + "'");
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("scheme") && !o.scheme) scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("case") && j.at("case").is_string()) {
      spec = get_case(j.at("case").get<std::string>());
    } else {
      spec = case_from_json(j.contains("case") ? j.at("case") : j);
    }
  }
  if (!o.case_name.empty()) spec = get_case(o.case_name);
  if (spec.name.empty()) throw InputError("either --case or --config is required");

  if (o.eps) spec.eps = *o.eps;
  if (o.t_final) spec.t_final = *o.t_final;
  if (o.cfl) spec.cfl = *o.cfl;
  if (o.n_r) {
    if (spec.name != "riemann") throw InputError("--nr only applies to the riemann case");
    spec.params["n_r"] = *o.n_r;
  }
  if (!o.cells.empty()) {
    if (static_cast<int>(o.cells.size()) != spec.dimension)
      throw InputError("--cells expects " + std::to_string(spec.dimension) + " value(s)");
    spec.cells[0] = o.cells[0];
    if (spec.dimension == 2) spec.cells[1] = o.cells[1];
  }
  return spec;
}

int do_run(const RunOptions& o) {
  RunConfig cfg;
  cfg.scheme = scheme_from_string(o.scheme.value_or("ap"));
  cfg.spec = resolve_case(o, cfg.scheme);
  cfg.out_dir = o.out;
  cfg.format = o.format;
  if (o.dt_max) cfg.dt_max = *o.dt_max;

  const RunResult r = run(cfg);
  std::cout << "case " << cfg.spec.name << " scheme " << to_string(cfg.scheme) << ": " << r.steps << " steps, t = "
            << r.state.t << ", min rho = " << r.min_rho << ", mass drift = " << r.max_mass_drift << '\n';
  for (const auto& f : r.files) std::cout << "  wrote " << f << '\n';
  if (!r.ok) {
    std::cerr << "error: " << r.error << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("QNEPB_THREADS")) Eigen::setNbThreads(std::atoi(threads));

  CLI::App app{"Quasi-neutral Euler-Poisson-Boltzmann solver"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Run a benchmark case");
  run_cmd->add_option("--case", ro.case_name, "Case name (see list-cases)");
  run_cmd->add_option("--scheme", ro.scheme, "ap | rusanov | ice")->check(CLI::IsMember({"ap", "rusanov", "ice"}));
  run_cmd->add_option("--config", ro.config, "JSON case description; flags override it");
  run_cmd->add_option("--out", ro.out, "Output directory");
  run_cmd->add_option("--format", ro.format, "csv | vtk | auto")->check(CLI::IsMember({"csv", "vtk", "auto"}));
  run_cmd->add_option("--eps", ro.eps, "Debye length");
  run_cmd->add_option("--tfinal", ro.t_final, "Final time");
  run_cmd->add_option("--nr", ro.n_r, "Right density of the Riemann problem");
  run_cmd->add_option("--cfl", ro.cfl, "Time step safety factor in (0, 1]");
  run_cmd->add_option("--dt-max", ro.dt_max, "Upper bound on the time step");
  run_cmd->add_option("--cells", ro.cells, "Cells per axis")->expected(1, 2);

  std::string suite = "all";
  int trials = 20;
  auto* verify_cmd = app.add_subcommand("verify", "Run property checks, one JSON line per check");
  verify_cmd->add_option("--suite", suite, "operators | pb | energy | all");
  verify_cmd->add_option("--trials", trials, "Random meshes per property")->check(CLI::PositiveNumber);

  bool as_json = false;
  auto* list_cmd = app.add_subcommand("list-cases", "List registered cases");
  list_cmd->add_flag("--json", as_json, "Print full case descriptions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(ro);
    if (verify_cmd->parsed()) return report(std::cout, run_suite(suite, trials)) ? 0 : 1;
    if (list_cmd->parsed()) {
      for (const auto& name : case_names()) {
        if (as_json)
          std::cout << to_json(get_case(name)).dump() << '\n';
        else
          std::cout << name << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
