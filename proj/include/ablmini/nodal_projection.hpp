#pragma once

#include "ablmini/field_ops.hpp"
#include "ablmini/solver_stats.hpp"

#include <array>
#include <vector>

namespace ablmini {

// End-of-step approximate projection. The pressure Poisson operator is the
// variational (trilinear element) form, a node-based 27-point stencil
// assembled from the 8 surrounding cells with coefficient dt/rho per cell.
// The RHS takes finite differences of the cell field across cells and
// averages them to each node (four contributions per coordinate direction at
// interior nodes; at walls only existing cells contribute). The pressure
// gradient differences phi along edges and averages the four edges per
// direction to the cell center. Geometric multigrid with 8-color
// Gauss-Seidel; since coarse trilinear spaces nest in fine ones, restriction
// is the exact transpose of trilinear prolongation.
class NodalProjection {
public:
  NodalProjection(const GridSpec& grid, WorkerPool& pool);

  // u <- P(u); writes p (nodal, periodic copies synced) and gp (cell
  // pressure gradient). gp on entry is the lagged gradient; p on entry is
  // used as the initial guess. Returns solve stats (iterations = V-cycles).
  SolveStats project(CellVectorField& u, NodeScalarField& p,
                     CellVectorField& gp, double rho, double dt, double tol,
                     int max_vcycles);

  // Nodal divergence D(u) of a cell vector field, unique-node flattening
  // (x-fastest, k-level outermost). Also the post-projection divergence
  // diagnostic.
  std::vector<double> divergence_nodal(const CellVectorField& u);
  double divergence_norm(const CellVectorField& u);

  // Test surface: fine-level operator application and edge-averaged
  // gradient on unique-node vectors.
  void apply_operator(const std::vector<double>& x, std::vector<double>& out,
                      double coef);
  void gradient_cells(const std::vector<double>& phi, CellVectorField& g);

  std::size_t unique_nodes() const {
    return std::size_t(nx_) * ny_ * (nz_ + 1);
  }

private:
  struct Level {
    int nx, ny, nz; // cells; node levels = nz+1
    double dx, dy, dz;
    // 27-point coefficients: [zrel+1][yrel+1][xrel+1], for interior rows
    // plus the bottom (k=0) and top (k=nz) half stencils
    std::array<std::array<std::array<double, 3>, 3>, 3> st_int, st_bot, st_top;
    CellScalarField x, b, r; // (nx, ny, nz+1) node containers, ghost 1
  };

  void build_stencils(Level& L);
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

  const GridSpec grid_;
  WorkerPool& pool_;
  int nx_, ny_, nz_;
  std::vector<Level> levels_;
};

} // namespace ablmini
