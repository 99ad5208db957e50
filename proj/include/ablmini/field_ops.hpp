#pragma once

#include "ablmini/fields.hpp"
#include "ablmini/worker_pool.hpp"

namespace ablmini {

// Fill every ghost layer of `f` per the BC spec. Periodic in z is rejected.
void fill_ghost(CellScalarField& f, const GridSpec& grid, const BCSpec& bc,
                WorkerPool& pool);

struct VectorBC {
  BCSpec x, y, z;
};

void fill_ghost(CellVectorField& u, const GridSpec& grid, const VectorBC& bc,
                WorkerPool& pool);

// Profile[k] = mean over (i,j) of the interior at level k, fixed-order
// pairwise reduction (thread-count independent).
Profile plane_average(const CellScalarField& f, const GridSpec& grid,
                      WorkerPool& pool);

// D = d(uf)/dx + d(vf)/dy + d(wf)/dz on cells.
CellScalarField divergence_mac(const FaceVelocitySet& f, const GridSpec& grid,
                               WorkerPool& pool);

// Interior 2-norm and sum helpers (deterministic reductions).
double interior_norm2(const CellScalarField& f, const GridSpec& grid,
                      WorkerPool& pool);
double interior_sum(const CellScalarField& f, const GridSpec& grid,
                    WorkerPool& pool);

} // namespace ablmini
