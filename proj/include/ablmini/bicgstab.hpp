#pragma once

#include "ablmini/field_ops.hpp"
#include "ablmini/solver_stats.hpp"

namespace ablmini {

// Operator wall treatment for the cell-centered 7-point Helmholtz
//   (alpha I - div(beta grad)) x = rhs
// x,y are periodic. Prescribed wall fluxes (wall stress, heat flux) do not
// appear here; they enter through the RHS boundary term assembled by the
// caller, and the operator then sees a zero-flux wall.
struct HelmholtzBC {
  enum Wall { ZeroFlux, Dirichlet }; // Dirichlet value is 0 at the wall face
  Wall bottom = ZeroFlux;
  Wall top = ZeroFlux;
};

struct HelmholtzResult {
  CellScalarField x;
  SolveStats stats;
};

// Preconditioned BiCGStab (Jacobi) to relative 2-norm residual <= tol.
// Face diffusivity is the arithmetic mean of the adjacent cells. On a
// rho-breakdown the iteration restarts once from the current iterate, then
// fails. Throws SolveFailure on non-convergence.
HelmholtzResult helmholtz_solve(double alpha, const CellScalarField& beta,
                                const CellScalarField& rhs,
                                const HelmholtzBC& bc, double tol,
                                const GridSpec& grid, WorkerPool& pool,
                                int max_iterations = 200,
                                const CellScalarField* x0 = nullptr);

// Apply the same operator (exposed for oracles/tests).
void helmholtz_apply(double alpha, const CellScalarField& beta,
                     const CellScalarField& x, CellScalarField& out,
                     const HelmholtzBC& bc, const GridSpec& grid,
                     WorkerPool& pool);

} // namespace ablmini
