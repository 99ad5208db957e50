#pragma once

#include "ablmini/field_ops.hpp"
#include "ablmini/wall_model.hpp"

namespace ablmini {

struct SgsConfig {
  enum Model { None, Smagorinsky, MfevSmagorinsky };
  enum GammaMode { Unity, Sullivan };
  Model model = Smagorinsky;
  double cs = 0.135;
  double pr_t = 0.7;
  GammaMode gamma_mode = Unity;
  double h_blend_frac = 0.25; // nu_T blending height as a fraction of Lz
};

// Six cell-centered strain components plus |S| = sqrt(2 S_ij S_ij).
struct StrainField {
  CellScalarField s11, s22, s33, s12, s13, s23, mag;

  StrainField() = default;
  explicit StrainField(const GridSpec& g)
      : s11(g), s22(g), s33(g), s12(g), s13(g), s23(g), mag(g) {}
};

// Central-difference strain rates at cell centers; u ghosts must be filled
// (wall ghosts carry the traction-consistent extension).
StrainField strain_rate(const CellVectorField& u, const GridSpec& grid,
                        WorkerPool& pool);

// S' = S - <S> with plane averages per component; magnitude recomputed.
StrainField fluctuating_strain(const StrainField& S, const GridSpec& grid,
                               WorkerPool& pool);

// nu_t = (Cs * Delta)^2 |Sf|, Delta = (dx dy dz)^(1/3).
CellScalarField smagorinsky_nut(const StrainField& Sf, const SgsConfig& cfg,
                                const GridSpec& grid, WorkerPool& pool);

// Isotropy factor profile. Unity mode: gamma = 1. Sullivan mode:
// gamma(z) = s'/(s' + sbar) with s'(z) = <|S - <S>|> and sbar(z) = |<S>|,
// clipped to (0,1]; 1 where both vanish.
Profile isotropy_gamma(const StrainField& S, const SgsConfig& cfg,
                       const GridSpec& grid, WorkerPool& pool);

// Mean-field eddy viscosity profile:
//   nu_T(z) = kappa u_tau z / phi_m(z/L) * max(0, 1 - z/h_blend)^2
// Zero everywhere when u_tau <= 0. h_blend <= 0 disables blending.
Profile mfev_nuT(const SurfaceState& surf, const MOSTParams& most,
                 double h_blend, const GridSpec& grid);

// Effective viscosity and mean-stress tendency assembly:
//   nu_eff = nu_molecular + gamma(z) * nu_t   (implicit Helmholtz diffusivity)
//   tendency_i = d/dz ( 2 nu_T(z) <S_i3>(z) ) (explicit, z-only)
struct SgsContributions {
  CellScalarField nu_eff;
  Profile mean_tend_x, mean_tend_y, mean_tend_z;
};

SgsContributions sgs_contributions(const StrainField& S,
                                   const CellScalarField& nu_t,
                                   const Profile& nu_T, const Profile& gamma,
                                   double nu_molecular, const GridSpec& grid,
                                   WorkerPool& pool);

} // namespace ablmini
