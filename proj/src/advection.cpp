#include "ablmini/advection.hpp"

#include <algorithm>
#include <cmath>

namespace ablmini {

namespace {

inline double mc_limited(double dm, double dp, double inv_h) {
  if (dm * dp <= 0.0) return 0.0;
  const double cen = 0.5 * (dm + dp);
  const double lim = std::min(std::abs(cen), 2.0 * std::min(std::abs(dm), std::abs(dp)));
  return std::copysign(lim, cen) * inv_h;
}

inline double riemann_face(double uL, double uR) {
  if (uL > 0.0 && uR > 0.0) return uL;
  if (uL < 0.0 && uR < 0.0) return uR;
  if (uL <= 0.0 && uR >= 0.0) return 0.0; // rarefaction through zero
  const double s = uL + uR;               // shock: pick by its speed
  if (s > 0.0) return uL;
  if (s < 0.0) return uR;
  return 0.0;
}

} // namespace

CellScalarField plm_slopes(const CellScalarField& f, int dir,
                           const GridSpec& grid, WorkerPool& pool) {
  CellScalarField s(grid);
  const double h = dir == 0 ? grid.dx : (dir == 1 ? grid.dy : grid.dz);
  const double inv_h = 1.0 / h;
  const int di = dir == 0 ? 1 : 0;
  const int dj = dir == 1 ? 1 : 0;
  const int dk = dir == 2 ? 1 : 0;
  pool.for_each(-1, grid.nz + 1, [&](int k) {
    for (int j = -1; j <= grid.ny; ++j)
      for (int i = -1; i <= grid.nx; ++i) {
        const double c = f(i, j, k);
        const double dm = c - f(i - di, j - dj, k - dk);
        const double dp = f(i + di, j + dj, k + dk) - c;
        s(i, j, k) = mc_limited(dm, dp, inv_h);
      }
  });
  return s;
}

FaceVelocitySet predict_face_velocities(const CellVectorField& u, double dt,
                                        const CellVectorField& src,
                                        const GridSpec& grid, WorkerPool& pool,
                                        double* max_normal_cfl) {
  FaceVelocitySet f(grid);
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  const CellScalarField sx = plm_slopes(u.x, 0, grid, pool);
  const CellScalarField sy = plm_slopes(u.y, 1, grid, pool);
  const CellScalarField sz = plm_slopes(u.z, 2, grid, pool);

  std::vector<double> cfl_level(nz, 0.0);
  pool.for_each(0, nz, [&](int k) {
    double cmax = 0.0;
    // x faces
    for (int j = 0; j < ny; ++j)
      for (int fi = 0; fi < nx; ++fi) {
        const int L = fi - 1, R = fi;
        const double uLc = u.x(L, j, k), uRc = u.x(R, j, k);
        const double uL = uLc + 0.5 * (grid.dx - dt * uLc) * sx(L, j, k) +
                          0.5 * dt * src.x(L, j, k);
        const double uR = uRc - 0.5 * (grid.dx + dt * uRc) * sx(R, j, k) +
                          0.5 * dt * src.x(R, j, k);
        f.u(fi, j, k) = riemann_face(uL, uR);
        cmax = std::max(cmax, std::abs(uRc) * dt / grid.dx);
      }
    // y faces
    for (int fj = 0; fj < ny; ++fj)
      for (int i = 0; i < nx; ++i) {
        const int L = fj - 1, R = fj;
        const double vLc = u.y(i, L, k), vRc = u.y(i, R, k);
        const double vL = vLc + 0.5 * (grid.dy - dt * vLc) * sy(i, L, k) +
                          0.5 * dt * src.y(i, L, k);
        const double vR = vRc - 0.5 * (grid.dy + dt * vRc) * sy(i, R, k) +
                          0.5 * dt * src.y(i, R, k);
        f.v(i, fj, k) = riemann_face(vL, vR);
        cmax = std::max(cmax, std::abs(vRc) * dt / grid.dy);
      }
    // z faces (interior only; wall faces stay zero)
    if (k >= 1)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const int L = k - 1, R = k;
          const double wLc = u.z(i, j, L), wRc = u.z(i, j, R);
          const double wL = wLc + 0.5 * (grid.dz - dt * wLc) * sz(i, j, L) +
                            0.5 * dt * src.z(i, j, L);
          const double wR = wRc - 0.5 * (grid.dz + dt * wRc) * sz(i, j, R) +
                            0.5 * dt * src.z(i, j, R);
          f.w(i, j, k) = riemann_face(wL, wR);
        }
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        cmax = std::max(cmax, std::abs(u.z(i, j, k)) * dt / grid.dz);
    cfl_level[k] = cmax;
  });
  f.sync_periodic(grid);
  if (max_normal_cfl)
    *max_normal_cfl = *std::max_element(cfl_level.begin(), cfl_level.end());
  return f;
}

namespace {

// upwind time-centered face state of c at a face with velocity uf
inline double face_state(double uf, double cL, double sL, double cR, double sR,
                         double h, double dt) {
  if (uf > 0.0) return cL + 0.5 * (h - dt * uf) * sL;
  if (uf < 0.0) return cR - 0.5 * (h + dt * uf) * sR;
  return 0.5 * (cL + 0.5 * h * sL + cR - 0.5 * h * sR);
}

} // namespace

CellScalarField advect(const CellScalarField& c, const FaceVelocitySet& mac,
                       double dt, const GridSpec& grid, WorkerPool& pool) {
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  const CellScalarField sx = plm_slopes(c, 0, grid, pool);
  const CellScalarField sy = plm_slopes(c, 1, grid, pool);
  const CellScalarField sz = plm_slopes(c, 2, grid, pool);
  CellScalarField tend(grid);

  pool.for_each(0, nz, [&](int k) {
    std::vector<double> fx(nx + 1), fy(ny + 1);
    for (int j = 0; j < ny; ++j) {
      for (int fi = 0; fi <= nx; ++fi) {
        const int L = fi - 1, R = fi;
        const double uf = mac.u(fi, j, k);
        fx[fi] = uf * face_state(uf, c(L, j, k), sx(L, j, k), c(R, j, k),
                                 sx(R, j, k), grid.dx, dt);
      }
      for (int i = 0; i < nx; ++i)
        tend(i, j, k) = -(fx[i + 1] - fx[i]) / grid.dx;
    }
    for (int i = 0; i < nx; ++i) {
      for (int fj = 0; fj <= ny; ++fj) {
        const int L = fj - 1, R = fj;
        const double vf = mac.v(i, fj, k);
        fy[fj] = vf * face_state(vf, c(i, L, k), sy(i, L, k), c(i, R, k),
                                 sy(i, R, k), grid.dy, dt);
      }
      for (int j = 0; j < ny; ++j)
        tend(i, j, k) -= (fy[j + 1] - fy[j]) / grid.dy;
    }
    // z fluxes slab-local (wall faces carry wf = 0, so their flux vanishes)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double wlo = mac.w(i, j, k);
        const double flo =
            wlo * face_state(wlo, c(i, j, k - 1), sz(i, j, k - 1), c(i, j, k),
                             sz(i, j, k), grid.dz, dt);
        const double whi = mac.w(i, j, k + 1);
        const double fhi =
            whi * face_state(whi, c(i, j, k), sz(i, j, k), c(i, j, k + 1),
                             sz(i, j, k + 1), grid.dz, dt);
        tend(i, j, k) -= (fhi - flo) / grid.dz;
      }
  });
  return tend;
}

CellVectorField advect(const CellVectorField& u, const FaceVelocitySet& mac,
                       double dt, const GridSpec& grid, WorkerPool& pool) {
  CellVectorField t(grid);
  t.x = advect(u.x, mac, dt, grid, pool);
  t.y = advect(u.y, mac, dt, grid, pool);
  t.z = advect(u.z, mac, dt, grid, pool);
  return t;
}

} // namespace ablmini
