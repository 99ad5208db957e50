#pragma once

#include "ablmini/field_ops.hpp"

namespace ablmini {

// Monotonized-central limited slopes of a cell field along one axis
// (0=x, 1=y, 2=z), in field units per meter. Valid on the interior plus a
// one-cell ring (needs the two-deep ghosts). Zero at local extrema; exact
// for linear fields.
CellScalarField plm_slopes(const CellScalarField& f, int dir,
                           const GridSpec& grid, WorkerPool& pool);

// Godunov predictor: extrapolate cell velocities to faces and to t+dt/2
// with normal-direction characteristic tracing, then resolve the face value
// upwind; states that straddle zero give a zero face velocity. src is the
// explicit force estimate (lagged pressure gradient plus body forces).
// max_normal_cfl, when given, receives max_c |u_n| dt/h (the predictor's
// stability measure; must stay <= 1).
FaceVelocitySet predict_face_velocities(const CellVectorField& u, double dt,
                                        const CellVectorField& src,
                                        const GridSpec& grid, WorkerPool& pool,
                                        double* max_normal_cfl = nullptr);

// Conservative advective tendency -div(F) with upwind PLM face states of c
// traced against already-projected MAC velocities. Ghosts of c must be
// filled.
CellScalarField advect(const CellScalarField& c, const FaceVelocitySet& mac,
                       double dt, const GridSpec& grid, WorkerPool& pool);

CellVectorField advect(const CellVectorField& u, const FaceVelocitySet& mac,
                       double dt, const GridSpec& grid, WorkerPool& pool);

} // namespace ablmini
