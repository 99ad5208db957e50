#pragma once

#include "ablmini/advection.hpp"
#include "ablmini/fields.hpp"
#include "ablmini/sgs.hpp"
#include "ablmini/wall_model.hpp"

#include <cstdint>
#include <string>

namespace ablmini {

// Full parameter set of a run. Defaults are the GABLS stable-ABL case on a
// 64^3 grid of the 400 m cube.
struct CaseConfig {
  // [grid]
  int nx = 64, ny = 64, nz = 64;
  int mult_x = 1, mult_y = 1; // weak-scaling domain multipliers (powers of 2)

  // [physics]
  double u_geo = 8.0, v_geo = 0.0; // geostrophic wind (m/s)
  double theta0 = 263.5;           // reference potential temperature (K)
  double cooling_rate = 0.25;      // surface cooling (K/h)
  double lapse = 0.01;             // inversion lapse above z_inversion (K/m)
  double z_inversion = 100.0;      // m
  double perturb_amp = 0.1;        // K
  double perturb_z = 50.0;         // m
  double reynolds = 5e7;           // Re = U Lb / nu
  double lb = 100.0;               // initial thermal boundary layer depth (m)
  double prandtl = 0.7;            // molecular Pr (Pe = Re*Pr)
  double coriolis_f = 1.39e-4;     // f-plane parameter (1/s), 73N
  double nu_override = -1.0;       // explicit molecular viscosity; <0 derives from Re
  bool wall_model_on = true;

  SgsConfig sgs;
  MOSTParams most;

  // [solver]
  double mac_tol = 1e-4;
  double nodal_tol = 1e-4;
  double helmholtz_tol = 1e-6;
  int max_vcycles = 50;
  int max_krylov = 200;
  double cfl_max = 0.9; // operating limit; 2.0 is the hard abort

  // [run]
  double dt = -1.0; // <0 derives from CFL 0.65 at u_geo
  long steps = 7200;
  std::uint64_t seed = 1;
  int threads = 1;

  static constexpr double domain_height = 400.0;

  double Lx() const { return mult_x * domain_height; }
  double Ly() const { return mult_y * domain_height; }
  double Lz() const { return domain_height; }
  double molecular_nu() const {
    return nu_override >= 0 ? nu_override : u_geo * lb / reynolds;
  }
  double molecular_kappa() const { return molecular_nu() / prandtl; }
  double timestep() const {
    if (dt > 0) return dt;
    return 0.65 * (domain_height / nz) / u_geo; // CFL 0.65 at the geostrophic speed
  }

  GridSpec make_grid() const;
  void validate() const; // throws std::invalid_argument naming the invariant
};

// Time-level solution bundle.
struct State {
  double t = 0.0;
  long step_index = 0;
  CellVectorField u;      // m/s
  CellScalarField theta;  // K
  NodeScalarField p;      // kinematic pressure (nodal)
  CellVectorField gp;     // lagged pressure gradient at cells
  CellScalarField nu_t;   // SGS viscosity from the previous update
  CellScalarField psi;    // MAC multiplier (warm start; not checkpointed)
  SurfaceState surface;

  State() = default;
  explicit State(const GridSpec& g)
      : u(g), theta(g), p(g), gp(g), nu_t(g), psi(g) {}
};

// u = (U_g, 0, 0); theta = 265 K up to the inversion then +lapse*(z-100);
// seeded, plane-mean-removed uniform perturbation below perturb_z.
State initialize(const CaseConfig& cfg, const GridSpec& grid,
                 WorkerPool& pool);

// Per-field ghost extension policies for the case. Wall-gradient values are
// refreshed each step from the surface state by the timestepper.
struct CaseBCs {
  BCSpec u, v, w, theta;
};

CaseBCs boundary_spec(const CaseConfig& cfg);

// Pick (mult_x, mult_y) powers of two with mult_x >= mult_y so that the
// total cell count reaches target_n at fixed spacing; Lz stays 400 m.
CaseConfig weak_scale_domain(const CaseConfig& base, long long target_n);

} // namespace ablmini
