#pragma once

#include <limits>
#include <vector>

namespace ablmini {

struct MOSTParams {
  double kappa = 0.4;   // von Karman constant
  double z0 = 0.1;      // roughness length (m)
  double beta_m = 4.8;  // stable phi_m slope: phi_m = 1 + beta_m z/L
  double beta_h = 7.8;  // stable phi_h slope
  double gravity = 9.81;
  double theta0 = 263.5; // reference potential temperature (K)
};

// Surface-layer state from the similarity solve; computed once per step at
// the first cell height z1 and then read-only.
struct SurfaceState {
  double u_tau = 0.0;    // friction velocity (m/s)
  double theta_star = 0.0;
  double q_wall = 0.0;   // kinematic heat flux -u_tau*theta_star (K m/s), <= 0 stable
  double L_obukhov = std::numeric_limits<double>::infinity();
  double phi_h = 1.0;    // 1 + beta_h z1/L
  double phi_m = 1.0;    // 1 + beta_m z1/L
  double theta_wall = 0.0;
  double sbar = 0.0;     // plane-averaged wind speed at z1
  double theta_bar = 0.0;
  double ubar = 0.0, vbar = 0.0; // plane-averaged velocity components at z1
  double z1 = 0.0;
  int iterations = 0;
};

// GABLS surface temperature schedule, t in seconds.
double surface_temperature(double t);

// Fixed-point solve of the stable similarity system
//   u_tau  = kappa*sbar / (ln(z1/z0) + beta_m z1/L)
//   th_star= kappa*dtheta / (ln(z1/z0) + beta_h z1/L)
//   L      = u_tau^2 theta0 / (kappa g th_star)
// from the neutral start with 0.5 damping, |du_tau| <= 1e-8 or 100 its.
// dtheta < 0 (unstable) is rejected.
SurfaceState friction_velocity(double sbar, double dtheta, double z1,
                               const MOSTParams& p);

// Local wall stress at the first cell level:
//   tau_i3 = (ubar_i*s + sbar*(u_i - ubar_i))/sbar^2 * u_tau^2
// returned as gradient-flux planes (nx*ny, x-fastest) handed to the
// momentum solves as the bottom Neumann term. Zero when sbar or u_tau is 0.
void moeng_stress(const std::vector<double>& u1, const std::vector<double>& v1,
                  const SurfaceState& surf, std::vector<double>& tau13,
                  std::vector<double>& tau23);

// Local surface heat flux (paper form, positive for stable stratification):
//   q = ((theta - tbar)*sbar + (tbar - theta_wall)*s) * u_tau*kappa/(sbar*phi_h)
// The energy equation applies it with the cooling sign (downward flux).
void surface_heat_flux(const std::vector<double>& theta1,
                       const std::vector<double>& u1,
                       const std::vector<double>& v1, const SurfaceState& surf,
                       const MOSTParams& p, std::vector<double>& q);

} // namespace ablmini
