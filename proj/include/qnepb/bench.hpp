#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnepb/apscheme.hpp"
#include "qnepb/initial.hpp"

namespace qnepb {

enum class Reference { none, rusanov_fine, ice_exact, ice_scheme };

std::string to_string(Reference r);
Reference reference_from_string(const std::string& s);

/// A benchmark problem. Initial data are derived from `name` and `params`.
struct CaseSpec {
  std::string name;
  int dimension = 1;
  DomainBounds bounds;
  std::array<int, 2> cells{2, 1};
  double eps = 1.0;
  double t_final = 1.0;
  double gamma = 1.01;
  double cfl = 0.9;
  BoundarySpec bc;
  Reference reference = Reference::none;
  std::vector<double> snapshots;  // output times besides t_final
  std::map<std::string, double> params;
  bool radial_cut = false;

  bool operator==(const CaseSpec&) const = default;

  double param(const std::string& key) const;
};

std::vector<std::string> case_names();

/// Registry lookup; throws InputError for unknown names.
CaseSpec get_case(const std::string& name);

InitialData initial_data(const CaseSpec& c);
MacMesh case_mesh(const CaseSpec& c);
SchemeConfig case_config(const CaseSpec& c);

nlohmann::json to_json(const CaseSpec& c);
CaseSpec case_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundarySpec& b);
BoundarySpec boundary_from_json(const nlohmann::json& j);

}  // namespace qnepb
