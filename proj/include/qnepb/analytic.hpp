#pragma once

namespace qnepb {

/// (1 - n_r e^u)(u^2 - 2u - 2 ln n_r) - 2u^2, whose smallest positive root is the plateau
/// velocity of the isothermal Riemann problem.
double riemann_um_residual(double u, double n_r);

/// Smallest positive root for 0 < n_r < 1; 0 for n_r = 1.
double solve_um(double n_r);

/// u_m / (1 - n_r e^{u_m}); throws when the denominator vanishes.
double shock_speed(double u_m, double n_r);

struct RiemannIceSolution {
  double n_r = 1.0;
  double u_m = 0.0;
  double u_s = 0.0;

  explicit RiemannIceSolution(double n_r);
  struct Point {
    double rho;
    double u;
  };
  /// Self-similar profile: left state, rarefaction, plateau, right state (t > 0).
  Point at(double t, double x) const;
};

RiemannIceSolution::Point ice_riemann_exact(double n_r, double t, double x);

/// Space-charge-limited sheath thickness s = (1/2)(2^{5/4}/3) V^{3/4} eps / sqrt(u).
double child_langmuir(double voltage, double speed, double eps);

}  // namespace qnepb
