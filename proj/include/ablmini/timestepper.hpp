#pragma once

#include "ablmini/bicgstab.hpp"
#include "ablmini/gabls_case.hpp"
#include "ablmini/mg_poisson.hpp"
#include "ablmini/nodal_projection.hpp"

#include <memory>

namespace ablmini {

// Per-substep wall times (seconds) and step diagnostics. Category names
// mirror the cost-breakdown rows of the run reports.
struct StepTimers {
  double fillpatch = 0, sgs_wall = 0, advection = 0, mac_projection = 0,
         scalar_solve = 0, velocity_solve = 0, pressure_solve = 0,
         diagnostics = 0, other = 0, total = 0;
  int mac_vcycles = 0;
  int nodal_vcycles = 0;
  int theta_iters = 0;
  double vel_iters_mean = 0; // mean of the three component solves
  double max_cfl = 0;
  double predictor_max_normal_cfl = 0; // flagged if > 1
  double nodal_div_norm = 0;
  double theta_min = 0, theta_max = 0, theta_bar_z1 = 0;
  double u_tau = 0;
};

// Boussinesq buoyancy at t^{n+1/2}: tendency_z = g*(theta_half - theta0)/theta0
// with theta_half = (theta_n + theta_np1)/2.
CellScalarField boussinesq_source(const CellScalarField& theta_n,
                                  const CellScalarField& theta_np1,
                                  double theta0, double g,
                                  const GridSpec& grid, WorkerPool& pool);

// f-plane Coriolis with geostrophic forcing, explicit at u^n:
//   tx = +fc (v - vg), ty = -fc (u - ug), tz = 0.
CellVectorField coriolis_source(const CellVectorField& u, double ug, double vg,
                                double fc, const GridSpec& grid,
                                WorkerPool& pool);

// max over cells of |u| dt/dx + |v| dt/dy + |w| dt/dz
double compute_cfl(const CellVectorField& u, double dt, const GridSpec& grid,
                   WorkerPool& pool);

// One flow step: fillpatch, sgs/wall update, Godunov advection with MAC
// projection, implicit scalar solve, implicit velocity solves, nodal
// projection, diagnostics. Owns the solver hierarchies and scratch.
class Stepper {
public:
  Stepper(const CaseConfig& cfg, WorkerPool& pool);

  StepTimers step(State& st);

  const GridSpec& grid() const { return grid_; }
  const CaseConfig& config() const { return cfg_; }
  double dt() const { return dt_; }
  NodalProjection& nodal() { return *nodal_; }
  CellPoissonMG& mg() { return *mg_; }

private:
  CaseConfig cfg_;
  GridSpec grid_;
  WorkerPool& pool_;
  double dt_;
  MOSTParams most_;
  CaseBCs bcs_;
  std::unique_ptr<CellPoissonMG> mg_;
  std::unique_ptr<NodalProjection> nodal_;
};

} // namespace ablmini
