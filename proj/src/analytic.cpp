#include "qnepb/analytic.hpp"

#include <cmath>

#include "qnepb/mesh.hpp"

namespace qnepb {

double riemann_um_residual(double u, double n_r) {
  return (1.0 - n_r * std::exp(u)) * (u * u - 2.0 * u - 2.0 * std::log(n_r)) - 2.0 * u * u;
}

double solve_um(double n_r) {
  if (!(n_r > 0.0 && n_r <= 1.0)) throw InputError("solve_um: n_r must lie in (0, 1]");
  if (n_r == 1.0) return 0.0;
  auto g = [n_r](double u) { return riemann_um_residual(u, n_r); };
  // G(0) = -2 ln n_r (1 - n_r) > 0; scan outwards for the first sign change
  double lo = 0.0, hi = 1e-3;
  const double g0 = g(lo);
  while (g(hi) * g0 > 0.0) {
    lo = hi;
    hi *= 1.5;
    if (hi > 50.0) throw InputError("solve_um: no bracket found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) * g0 > 0.0 ? lo : hi) = mid;
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double e = n_r * std::exp(u);
    const double p = u * u - 2.0 * u - 2.0 * std::log(n_r);
    const double dg = -e * p + (1.0 - e) * (2.0 * u - 2.0) - 4.0 * u;
    if (dg == 0.0) break;
    const double next = u - g(u) / dg;
    if (!(next >= lo && next <= hi)) break;
    u = next;
  }
  return u;
}

double shock_speed(double u_m, double n_r) {
  const double d = 1.0 - n_r * std::exp(u_m);
  if (d == 0.0) throw InputError("shock_speed: not defined for a trivial jump");
  return u_m / d;
}

RiemannIceSolution::RiemannIceSolution(double nr) : n_r(nr), u_m(solve_um(nr)) {
  u_s = nr < 1.0 ? shock_speed(u_m, nr) : 0.0;
}

RiemannIceSolution::Point RiemannIceSolution::at(double t, double x) const {
  if (!(t > 0.0)) throw InputError("ice_riemann_exact: t must be positive");
  if (x <= -t) return {1.0, 0.0};
  if (x <= (u_m - 1.0) * t) return {std::exp(-x / t - 1.0), x / t + 1.0};
  if (x <= u_s * t) return {std::exp(-u_m), u_m};
  return {n_r, 0.0};
}

RiemannIceSolution::Point ice_riemann_exact(double n_r, double t, double x) {
  return RiemannIceSolution(n_r).at(t, x);
}

double child_langmuir(double voltage, double speed, double eps) {
  if (voltage < 0.0 || !(speed > 0.0) || !(eps > 0.0)) throw InputError("child_langmuir: invalid arguments");
  return 0.5 * (std::pow(2.0, 1.25) / 3.0) * std::pow(voltage, 0.75) * eps / std::sqrt(speed);
}

}  // namespace qnepb
