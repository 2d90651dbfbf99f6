#pragma once

#include <optional>

#include "qnepb/mesh.hpp"

namespace qnepb {

/// Logarithmic mean (a-b)/(ln a - ln b), the unique rho_KL in [min,max] with
/// rho_K - rho_L = rho_KL (ln rho_K - ln rho_L). Requires a, b > 0.
double log_mean(double a, double b);

/// Relative gap below which log_mean switches to its series expansion.
inline constexpr double kLogMeanSwitch = 1e-8;

/// Discrete gradient on faces: (|sigma|/|D_sigma|)(q_plus - q_minus) on interior faces.
/// External faces follow `bc`: zero for Neumann-type sides, a half-cell one-sided
/// difference against the boundary value for Dirichlet, wraparound for periodic.
FaceField gradient(const PrimalField& q, const MacMesh& mesh, const VariableBc& bc);

/// Homogeneous-Neumann gradient (the analysis setting): external faces carry 0.
FaceField gradient(const PrimalField& q, const MacMesh& mesh);

/// (div v)_K = (1/|K|) sum_sigma |sigma| v_{sigma,K}, using whatever v holds on external faces.
PrimalField divergence(const FaceField& v, const MacMesh& mesh);

/// div(coeff * grad q). `coeff` defaults to 1 and must be positive on every face that
/// carries a gradient.
PrimalField laplacian(const PrimalField& q, const MacMesh& mesh, const VariableBc& bc,
                      const std::optional<FaceField>& coeff = std::nullopt);

/// Defect of the div-grad duality: sum_K |K| q_K (div v)_K + sum_sigma |D_sigma| (grad q)_sigma v_sigma.
/// `v` is treated as vanishing on external faces.
double duality_residual(const PrimalField& q, const FaceField& v, const MacMesh& mesh);

/// Logarithmic-mean interface density on interior faces; external faces carry the
/// adjacent cell value. Throws on non-positive density.
FaceField interface_density(const PrimalField& rho, const MacMesh& mesh);

/// Weight |sigma|^2/|D_sigma| coupling the two cells of a face in the stencil, including
/// the wrap face of a periodic line (given by the face at position 0).
double face_weight(const MacMesh& mesh, int axis, int f, const VariableBc& bc);

}  // namespace qnepb
