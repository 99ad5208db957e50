#include "ablmini/sgs.hpp"

#include <cmath>

namespace ablmini {

StrainField strain_rate(const CellVectorField& u, const GridSpec& grid,
                        WorkerPool& pool) {
  StrainField S(grid);
  const double i2x = 0.5 / grid.dx, i2y = 0.5 / grid.dy, i2z = 0.5 / grid.dz;
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double dudx = (u.x(i + 1, j, k) - u.x(i - 1, j, k)) * i2x;
        const double dudy = (u.x(i, j + 1, k) - u.x(i, j - 1, k)) * i2y;
        const double dudz = (u.x(i, j, k + 1) - u.x(i, j, k - 1)) * i2z;
        const double dvdx = (u.y(i + 1, j, k) - u.y(i - 1, j, k)) * i2x;
        const double dvdy = (u.y(i, j + 1, k) - u.y(i, j - 1, k)) * i2y;
        const double dvdz = (u.y(i, j, k + 1) - u.y(i, j, k - 1)) * i2z;
        const double dwdx = (u.z(i + 1, j, k) - u.z(i - 1, j, k)) * i2x;
        const double dwdy = (u.z(i, j + 1, k) - u.z(i, j - 1, k)) * i2y;
        const double dwdz = (u.z(i, j, k + 1) - u.z(i, j, k - 1)) * i2z;
        const double s11 = dudx, s22 = dvdy, s33 = dwdz;
        const double s12 = 0.5 * (dudy + dvdx);
        const double s13 = 0.5 * (dudz + dwdx);
        const double s23 = 0.5 * (dvdz + dwdy);
        S.s11(i, j, k) = s11;
        S.s22(i, j, k) = s22;
        S.s33(i, j, k) = s33;
        S.s12(i, j, k) = s12;
        S.s13(i, j, k) = s13;
        S.s23(i, j, k) = s23;
        S.mag(i, j, k) = std::sqrt(
            2.0 * (s11 * s11 + s22 * s22 + s33 * s33 +
                   2.0 * (s12 * s12 + s13 * s13 + s23 * s23)));
      }
  });
  return S;
}

StrainField fluctuating_strain(const StrainField& S, const GridSpec& grid,
                               WorkerPool& pool) {
  StrainField F(grid);
  const CellScalarField* src[6] = {&S.s11, &S.s22, &S.s33,
                                   &S.s12, &S.s13, &S.s23};
  CellScalarField* dst[6] = {&F.s11, &F.s22, &F.s33, &F.s12, &F.s13, &F.s23};
  for (int c = 0; c < 6; ++c) {
    const Profile m = plane_average(*src[c], grid, pool);
    pool.for_each(0, grid.nz, [&](int k) {
      const double mk = m.value[k];
      for (int j = 0; j < grid.ny; ++j) {
        const double* s = src[c]->row(j, k);
        double* d = dst[c]->row(j, k);
        for (int i = 0; i < grid.nx; ++i) d[i] = s[i] - mk;
      }
    });
  }
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double s11 = F.s11(i, j, k), s22 = F.s22(i, j, k),
                     s33 = F.s33(i, j, k), s12 = F.s12(i, j, k),
                     s13 = F.s13(i, j, k), s23 = F.s23(i, j, k);
        F.mag(i, j, k) = std::sqrt(
            2.0 * (s11 * s11 + s22 * s22 + s33 * s33 +
                   2.0 * (s12 * s12 + s13 * s13 + s23 * s23)));
      }
  });
  return F;
}

CellScalarField smagorinsky_nut(const StrainField& Sf, const SgsConfig& cfg,
                                const GridSpec& grid, WorkerPool& pool) {
  CellScalarField nut(grid);
  const double delta = std::cbrt(grid.dx * grid.dy * grid.dz);
  const double c2 = cfg.cs * delta * cfg.cs * delta;
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j) {
      const double* m = Sf.mag.row(j, k);
      double* n = nut.row(j, k);
      for (int i = 0; i < grid.nx; ++i) n[i] = c2 * m[i];
    }
  });
  return nut;
}

Profile isotropy_gamma(const StrainField& S, const SgsConfig& cfg,
                       const GridSpec& grid, WorkerPool& pool) {
  Profile g;
  g.z.resize(grid.nz);
  g.value.assign(grid.nz, 1.0);
  for (int k = 0; k < grid.nz; ++k) g.z[k] = grid.zc(k);
  if (cfg.gamma_mode == SgsConfig::Unity) return g;

  const Profile m11 = plane_average(S.s11, grid, pool);
  const Profile m22 = plane_average(S.s22, grid, pool);
  const Profile m33 = plane_average(S.s33, grid, pool);
  const Profile m12 = plane_average(S.s12, grid, pool);
  const Profile m13 = plane_average(S.s13, grid, pool);
  const Profile m23 = plane_average(S.s23, grid, pool);
  const StrainField F = fluctuating_strain(S, grid, pool);
  const Profile sprime = plane_average(F.mag, grid, pool);

  for (int k = 0; k < grid.nz; ++k) {
    const double sbar = std::sqrt(
        2.0 * (m11.value[k] * m11.value[k] + m22.value[k] * m22.value[k] +
               m33.value[k] * m33.value[k] +
               2.0 * (m12.value[k] * m12.value[k] +
                      m13.value[k] * m13.value[k] +
                      m23.value[k] * m23.value[k])));
    const double sp = sprime.value[k];
    double gv = 1.0;
    if (sp + sbar > 0.0) gv = sp / (sp + sbar);
    g.value[k] = std::min(1.0, std::max(1e-12, gv));
  }
  return g;
}

Profile mfev_nuT(const SurfaceState& surf, const MOSTParams& most,
                 double h_blend, const GridSpec& grid) {
  Profile p;
  p.z.resize(grid.nz);
  p.value.assign(grid.nz, 0.0);
  for (int k = 0; k < grid.nz; ++k) p.z[k] = grid.zc(k);
  if (surf.u_tau <= 0.0) return p;
  const bool stable = std::isfinite(surf.L_obukhov);
  for (int k = 0; k < grid.nz; ++k) {
    const double z = p.z[k];
    const double phi_m =
        stable ? 1.0 + most.beta_m * z / surf.L_obukhov : 1.0;
    double blend = 1.0;
    if (h_blend > 0.0) {
      const double f = std::max(0.0, 1.0 - z / h_blend);
      blend = f * f;
    }
    p.value[k] = most.kappa * surf.u_tau * z / phi_m * blend;
  }
  return p;
}

SgsContributions sgs_contributions(const StrainField& S,
                                   const CellScalarField& nu_t,
                                   const Profile& nu_T, const Profile& gamma,
                                   double nu_molecular, const GridSpec& grid,
                                   WorkerPool& pool) {
  SgsContributions out;
  out.nu_eff = CellScalarField(grid);
  pool.for_each(0, grid.nz, [&](int k) {
    const double g = gamma.value.empty() ? 1.0 : gamma.value[k];
    for (int j = 0; j < grid.ny; ++j) {
      const double* nt = nu_t.row(j, k);
      double* ne = out.nu_eff.row(j, k);
      for (int i = 0; i < grid.nx; ++i) ne[i] = nu_molecular + g * nt[i];
    }
  });

  // mean SGS stress divergence: tau_mean_i3 = -2 nu_T <S_i3>; the momentum
  // tendency is -d(tau)/dz = +d(2 nu_T <S_i3>)/dz, z-derivatives of profile
  // products (one-sided at the walls)
  const Profile m13 = plane_average(S.s13, grid, pool);
  const Profile m23 = plane_average(S.s23, grid, pool);
  const Profile m33 = plane_average(S.s33, grid, pool);
  auto ddz = [&](const Profile& m) {
    Profile t;
    t.z = m.z;
    const int nz = grid.nz;
    t.value.assign(nz, 0.0);
    std::vector<double> prod(nz);
    for (int k = 0; k < nz; ++k)
      prod[k] = 2.0 * (nu_T.value.empty() ? 0.0 : nu_T.value[k]) * m.value[k];
    for (int k = 0; k < nz; ++k) {
      if (k == 0)
        t.value[k] = (prod[1] - prod[0]) / grid.dz;
      else if (k == nz - 1)
        t.value[k] = (prod[nz - 1] - prod[nz - 2]) / grid.dz;
      else
        t.value[k] = (prod[k + 1] - prod[k - 1]) / (2.0 * grid.dz);
    }
    return t;
  };
  out.mean_tend_x = ddz(m13);
  out.mean_tend_y = ddz(m23);
  out.mean_tend_z = ddz(m33);
  return out;
}

} // namespace ablmini
