#include "ablmini/wall_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ablmini {

double surface_temperature(double t) {
  if (t < 0) throw std::invalid_argument("surface_temperature: t < 0");
  return 265.0 - 0.25 * (t / 3600.0);
}

SurfaceState friction_velocity(double sbar, double dtheta, double z1,
                               const MOSTParams& p) {
  if (sbar < 0) throw std::invalid_argument("friction_velocity: sbar < 0");
  if (z1 <= p.z0)
    throw std::invalid_argument("friction_velocity: z1 must exceed z0");
  if (dtheta < 0)
    throw std::invalid_argument(
        "friction_velocity: unstable stratification (dtheta < 0) is outside "
        "this case family");

  SurfaceState s;
  s.z1 = z1;
  const double logz = std::log(z1 / p.z0);
  if (sbar == 0.0) {
    s.q_wall = 0.0;
    return s;
  }

  // neutral start, damped fixed point
  double u_tau = p.kappa * sbar / logz;
  double th_star = p.kappa * dtheta / logz;
  bool converged = false;
  int it = 0;
  for (it = 1; it <= 100; ++it) {
    double zeta = 0.0;
    if (th_star > 0 && u_tau > 0) {
      const double L = u_tau * u_tau * p.theta0 / (p.kappa * p.gravity * th_star);
      zeta = z1 / L;
    }
    const double u_new = p.kappa * sbar / (logz + p.beta_m * zeta);
    const double t_new = p.kappa * dtheta / (logz + p.beta_h * zeta);
    if (std::abs(u_new - u_tau) <= 1e-8) {
      u_tau = u_new;
      th_star = t_new;
      converged = true;
      break;
    }
    u_tau = 0.5 * u_tau + 0.5 * u_new;
    th_star = 0.5 * th_star + 0.5 * t_new;
  }
  if (!converged)
    throw std::runtime_error(
        "friction_velocity: fixed point did not converge (u_tau=" +
        std::to_string(u_tau) + ", theta_star=" + std::to_string(th_star) + ")");
  s.u_tau = u_tau;
  s.theta_star = th_star;
  s.q_wall = -u_tau * th_star;
  if (th_star > 0 && u_tau > 0) {
    s.L_obukhov = u_tau * u_tau * p.theta0 / (p.kappa * p.gravity * th_star);
    const double z = z1 / s.L_obukhov;
    s.phi_m = 1.0 + p.beta_m * z;
    s.phi_h = 1.0 + p.beta_h * z;
  }
  s.iterations = it;
  return s;
}

void moeng_stress(const std::vector<double>& u1, const std::vector<double>& v1,
                  const SurfaceState& surf, std::vector<double>& tau13,
                  std::vector<double>& tau23) {
  const std::size_t n = u1.size();
  tau13.assign(n, 0.0);
  tau23.assign(n, 0.0);
  if (surf.sbar <= 0.0 || surf.u_tau <= 0.0) return;
  const double scale = surf.u_tau * surf.u_tau / (surf.sbar * surf.sbar);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sqrt(u1[i] * u1[i] + v1[i] * v1[i]);
    tau13[i] = (surf.ubar * s + surf.sbar * (u1[i] - surf.ubar)) * scale;
    tau23[i] = (surf.vbar * s + surf.sbar * (v1[i] - surf.vbar)) * scale;
  }
}

void surface_heat_flux(const std::vector<double>& theta1,
                       const std::vector<double>& u1,
                       const std::vector<double>& v1, const SurfaceState& surf,
                       const MOSTParams& p, std::vector<double>& q) {
  const std::size_t n = theta1.size();
  q.assign(n, 0.0);
  if (surf.sbar <= 0.0 || surf.u_tau <= 0.0 || surf.phi_h <= 0.0) return;
  const double scale = surf.u_tau * p.kappa / (surf.sbar * surf.phi_h);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sqrt(u1[i] * u1[i] + v1[i] * v1[i]);
    q[i] = ((theta1[i] - surf.theta_bar) * surf.sbar +
            (surf.theta_bar - surf.theta_wall) * s) *
           scale;
  }
}

} // namespace ablmini
