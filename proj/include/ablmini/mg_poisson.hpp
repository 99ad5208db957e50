#pragma once

#include "ablmini/field_ops.hpp"
#include "ablmini/solver_stats.hpp"

#include <memory>
#include <utility>

namespace ablmini {

// Geometric multigrid for the cell-centered 7-point Poisson operator
//   L psi = div( coef * grad psi ),  coef = 1/rho (constant),
// periodic in x,y and zero-flux at the z walls. V(2,2) with red-black
// Gauss-Seidel smoothing; factor-2 coarsening while all dimensions stay
// even and >= 4; CG on the coarsest level. The all-Neumann/periodic system
// is singular (constants); the mean is pinned to zero.
class CellPoissonMG {
public:
  CellPoissonMG(const GridSpec& grid, WorkerPool& pool);

  // Solve L x = b to relative 2-norm residual <= tol. x is used as the
  // initial guess. Returns stats; iterations = V-cycles used.
  SolveStats solve(CellScalarField& x, const CellScalarField& b, double coef,
                   double tol, int max_vcycles);

  // Apply the fine-level operator (exposed for tests/oracles).
  void apply(const CellScalarField& x, CellScalarField& out, double coef);

  // Residual contraction factor of the most recent solve's last cycle.
  double last_cycle_factor() const { return last_factor_; }

  int levels() const { return static_cast<int>(levels_.size()); }

  // Galerkin-consistency probe: <R v, w>_coarse vs <v, P w>_fine on level l
  // (restriction and prolongation are adjoint up to the cell-volume factor 8).
  std::pair<double, double> transfer_adjoint_pair(int level,
                                                  const std::vector<double>& vf,
                                                  const std::vector<double>& wc);

private:
  struct Level {
    int nx, ny, nz;
    double dx, dy, dz;
    CellScalarField x, b, r;
  };

  void fill_wrap(CellScalarField& f, const Level& L);
  void apply_level(Level& L, const CellScalarField& x, CellScalarField& out,
                   double coef);
  void smooth(Level& L, double coef, int sweeps);
  void residual(Level& L, double coef);
  void restrict_to(const Level& fine, Level& coarse);
  void prolong_add(const Level& coarse, Level& fine);
  void coarse_solve(Level& L, double coef);
  void vcycle(int l, double coef);
  double norm2(const CellScalarField& f, const Level& L);
  void pin_mean(CellScalarField& f, const Level& L);

  WorkerPool& pool_;
  std::vector<Level> levels_;
  double last_factor_ = 0.0;
};

// MAC projection: make the face velocities discretely divergence free.
// Solves div((1/rho) grad psi) = div(f) and subtracts (1/rho) grad psi from
// the faces. psi's mean is pinned. Throws SolveFailure on non-convergence.
struct MacProjectResult {
  CellScalarField psi;
  SolveStats stats;
  double input_div_norm = 0.0;
  double output_div_norm = 0.0;
};

MacProjectResult mac_project(FaceVelocitySet& f, const GridSpec& grid,
                             double rho, double tol, CellPoissonMG& mg,
                             WorkerPool& pool, int max_vcycles = 50,
                             const CellScalarField* psi0 = nullptr);

} // namespace ablmini
