#pragma once

#include <iosfwd>
#include <vector>

#include "qnepb/apscheme.hpp"

namespace qnepb {

struct EnergyBreakdown {
  double kinetic = 0.0;
  double boltzmann = 0.0;
  double field = 0.0;
  double total = 0.0;
};

/// Kinetic sum over interior faces, Boltzmann sum over cells, field sum over interior faces
/// (plus the wrap face of each periodic line).
EnergyBreakdown total_energy(const State& s, const MacMesh& mesh, double eps, const VariableBc& potential_bc = {});

double total_mass(const PrimalField& rho, const MacMesh& mesh);
double min_value(const PrimalField& q);

/// max_K |rho_K - exp(phi_K)|
double quasineutrality_residual(const State& s);

/// Per-cell remainder of the discrete potential-energy identity between phi^n and phi^{n+1};
/// non-negative by convexity.
PrimalField potential_remainder(const PrimalField& phi_n, const PrimalField& phi_np1, const MacMesh& mesh, double eps,
                                double dt);

/// Largest x where rho >= plateau/2, linearly interpolated towards the next sample.
double sheath_edge(const std::vector<double>& x, const PrimalField& rho, double plateau);

/// sum_K |K| |a_K - b_K|
double l1_difference(const PrimalField& a, const PrimalField& b, const MacMesh& mesh);
double l1_norm(const PrimalField& a, const MacMesh& mesh);

struct DiagRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double min_rho = 0.0;
  EnergyBreakdown energy;
  double qn_residual = 0.0;
};

DiagRecord make_record(const State& s, double dt, const MacMesh& mesh, double eps, const VariableBc& potential_bc);

class DiagSeries {
 public:
  /// Records must arrive with strictly increasing t.
  void append(const DiagRecord& r);
  const std::vector<DiagRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  void write_csv(std::ostream& os) const;

  static constexpr const char* kHeader = "t,dt,mass,min_rho,E_kin,E_boltz,E_field,E_total,qn_residual";

 private:
  std::vector<DiagRecord> records_;
};

}  // namespace qnepb
