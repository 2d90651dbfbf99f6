#pragma once

#include <array>
#include <functional>

#include "qnepb/apscheme.hpp"

namespace qnepb {

using PointFunction = std::function<double(double x, double y)>;

/// Closed-form initial data. Empty velocity components are zero; an empty `phi` means the
/// potential is obtained from the Poisson-Boltzmann equation with the projected density.
struct InitialData {
  PointFunction rho;
  std::array<PointFunction, 2> u;
  PointFunction phi;
};

/// Midpoint samples of rho (cell centres) and u (face centres), velocity boundary values
/// applied, and phi from -eps^2 lap(phi) + exp(phi) = rho under the potential conditions.
State project_initial(const InitialData& data, const MacMesh& mesh, const SchemeConfig& cfg);

/// Potential solving -eps^2 lap(phi) + exp(phi) = rho with the given boundary conditions.
PrimalField equilibrium_potential(const PrimalField& rho, const MacMesh& mesh, double eps, const VariableBc& bc,
                                  const PbTolerances& tol, const PrimalField& phi_init = {});

}  // namespace qnepb
