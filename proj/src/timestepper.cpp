#include "ablmini/timestepper.hpp"

#include "ablmini/advection.hpp"
#include "ablmini/kernels.hpp"

#include <chrono>
#include <cmath>

namespace ablmini {

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Timer {
  double t0;
  Timer() : t0(now_s()) {}
  double lap() {
    const double t = now_s();
    const double d = t - t0;
    t0 = t;
    return d;
  }
};

void extract_plane(const CellScalarField& f, int k, std::vector<double>& out) {
  const int nx = f.nx(), ny = f.ny();
  out.resize(std::size_t(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const double* r = f.row(j, k);
    for (int i = 0; i < nx; ++i) out[std::size_t(j) * nx + i] = r[i];
  }
}

double plane_mean(const std::vector<double>& v) {
  return kern::pairwise_combine(v.data(), static_cast<int>(v.size())) /
         double(v.size());
}

} // namespace

CellScalarField boussinesq_source(const CellScalarField& theta_n,
                                  const CellScalarField& theta_np1,
                                  double theta0, double g,
                                  const GridSpec& grid, WorkerPool& pool) {
  CellScalarField t(grid);
  const double s = g / theta0;
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j) {
      const double* a = theta_n.row(j, k);
      const double* b = theta_np1.row(j, k);
      double* o = t.row(j, k);
      for (int i = 0; i < grid.nx; ++i)
        o[i] = s * (0.5 * (a[i] + b[i]) - theta0);
    }
  });
  return t;
}

CellVectorField coriolis_source(const CellVectorField& u, double ug, double vg,
                                double fc, const GridSpec& grid,
                                WorkerPool& pool) {
  CellVectorField t(grid);
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        t.x(i, j, k) = fc * (u.y(i, j, k) - vg);
        t.y(i, j, k) = -fc * (u.x(i, j, k) - ug);
        t.z(i, j, k) = 0.0;
      }
  });
  return t;
}

double compute_cfl(const CellVectorField& u, double dt, const GridSpec& grid,
                   WorkerPool& pool) {
  std::vector<double> lv(grid.nz, 0.0);
  pool.for_each(0, grid.nz, [&](int k) {
    double m = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double c = std::abs(u.x(i, j, k)) / grid.dx +
                         std::abs(u.y(i, j, k)) / grid.dy +
                         std::abs(u.z(i, j, k)) / grid.dz;
        m = std::max(m, c);
      }
    lv[k] = m;
  });
  double m = 0.0;
  for (double v : lv) m = std::max(m, v);
  return m * dt;
}

Stepper::Stepper(const CaseConfig& cfg, WorkerPool& pool)
    : cfg_(cfg), grid_(cfg.make_grid()), pool_(pool), dt_(cfg.timestep()),
      most_(cfg.most), bcs_(boundary_spec(cfg)) {
  cfg_.validate();
  most_.theta0 = cfg.theta0;
  mg_ = std::make_unique<CellPoissonMG>(grid_, pool_);
  nodal_ = std::make_unique<NodalProjection>(grid_, pool_);
}

StepTimers Stepper::step(State& st) {
  StepTimers tm;
  const double step_t0 = now_s();
  const double rho = 1.0; // constant density, kinematic formulation
  const double dt = dt_;
  const double z1 = 0.5 * grid_.dz;
  const int nx = grid_.nx, ny = grid_.ny, nz = grid_.nz;

  tm.max_cfl = compute_cfl(st.u, dt, grid_, pool_);
  if (tm.max_cfl > 2.0)
    throw std::runtime_error("step: CFL " + std::to_string(tm.max_cfl) +
                             " exceeds the hard cap of 2");

  Timer t;

  // (1) fillpatch: ghost fills with the lagged surface gradients
  fill_ghost(st.u.x, grid_, bcs_.u, pool_);
  fill_ghost(st.u.y, grid_, bcs_.v, pool_);
  fill_ghost(st.u.z, grid_, bcs_.w, pool_);
  fill_ghost(st.theta, grid_, bcs_.theta, pool_);
  tm.fillpatch = t.lap();

  // (2) sgs / wall update at theta_w(t^{n+1/2})
  std::vector<double> u1, v1, th1, s1;
  extract_plane(st.u.x, 0, u1);
  extract_plane(st.u.y, 0, v1);
  extract_plane(st.theta, 0, th1);
  s1.resize(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i)
    s1[i] = std::sqrt(u1[i] * u1[i] + v1[i] * v1[i]);

  if (cfg_.wall_model_on) {
    const double theta_w =
        265.0 - cfg_.cooling_rate * ((st.t + 0.5 * dt) / 3600.0);
    const double sbar = plane_mean(s1);
    const double tbar = plane_mean(th1);
    SurfaceState surf = friction_velocity(sbar, tbar - theta_w, z1, most_);
    surf.theta_wall = theta_w;
    surf.sbar = sbar;
    surf.theta_bar = tbar;
    surf.ubar = plane_mean(u1);
    surf.vbar = plane_mean(v1);
    st.surface = surf;

    // traction-consistent bottom ghost gradients, then refresh the bottom
    // ghost planes of u, v, theta
    if (surf.sbar > 0 && surf.u_tau > 0) {
      const double dudz = surf.u_tau * surf.phi_m / (most_.kappa * z1);
      bcs_.u.zlo.value = dudz * (surf.ubar / surf.sbar);
      bcs_.v.zlo.value = dudz * (surf.vbar / surf.sbar);
      bcs_.theta.zlo.value =
          surf.theta_star * surf.phi_h / (most_.kappa * z1);
    } else {
      bcs_.u.zlo.value = bcs_.v.zlo.value = bcs_.theta.zlo.value = 0.0;
    }
    fill_ghost(st.u.x, grid_, bcs_.u, pool_);
    fill_ghost(st.u.y, grid_, bcs_.v, pool_);
    fill_ghost(st.theta, grid_, bcs_.theta, pool_);
  } else {
    st.surface = SurfaceState{};
    st.surface.z1 = z1;
  }

  const StrainField S = strain_rate(st.u, grid_, pool_);
  Profile gamma = isotropy_gamma(S, cfg_.sgs, grid_, pool_);
  Profile nuT;
  if (cfg_.sgs.model == SgsConfig::None) {
    st.nu_t.fill(0.0);
  } else if (cfg_.sgs.model == SgsConfig::Smagorinsky) {
    st.nu_t = smagorinsky_nut(S, cfg_.sgs, grid_, pool_);
  } else {
    const StrainField Sf = fluctuating_strain(S, grid_, pool_);
    st.nu_t = smagorinsky_nut(Sf, cfg_.sgs, grid_, pool_);
    nuT = mfev_nuT(st.surface, most_, cfg_.sgs.h_blend_frac * grid_.Lz, grid_);
  }
  SgsContributions sgs = sgs_contributions(S, st.nu_t, nuT, gamma,
                                           cfg_.molecular_nu(), grid_, pool_);
  CellScalarField kappa_eff(grid_);
  pool_.for_each(0, nz, [&](int k) {
    const double ipr = 1.0 / cfg_.sgs.pr_t;
    for (int j = 0; j < ny; ++j) {
      const double* ne = sgs.nu_eff.row(j, k);
      double* ke = kappa_eff.row(j, k);
      for (int i = 0; i < nx; ++i) ke[i] = ne[i] * ipr;
    }
  });
  tm.sgs_wall = t.lap();
  tm.u_tau = st.surface.u_tau;

  // (3) advection: predict -> MAC project -> tendencies
  CellVectorField src = coriolis_source(st.u, cfg_.u_geo, cfg_.v_geo,
                                        cfg_.coriolis_f, grid_, pool_);
  {
    const CellScalarField buoy =
        boussinesq_source(st.theta, st.theta, cfg_.theta0, most_.gravity,
                          grid_, pool_);
    pool_.for_each(0, nz, [&](int k) {
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          src.x(i, j, k) -= st.gp.x(i, j, k) / rho;
          src.y(i, j, k) -= st.gp.y(i, j, k) / rho;
          src.z(i, j, k) += buoy(i, j, k) - st.gp.z(i, j, k) / rho;
        }
    });
  }
  FaceVelocitySet faces = predict_face_velocities(
      st.u, dt, src, grid_, pool_, &tm.predictor_max_normal_cfl);
  tm.advection = t.lap();

  MacProjectResult mac = mac_project(faces, grid_, rho, cfg_.mac_tol, *mg_,
                                     pool_, cfg_.max_vcycles, &st.psi);
  st.psi = mac.psi;
  tm.mac_vcycles = mac.stats.iterations;
  tm.mac_projection = t.lap();

  const CellVectorField tend_u = advect(st.u, faces, dt, grid_, pool_);
  const CellScalarField tend_th = advect(st.theta, faces, dt, grid_, pool_);
  tm.advection += t.lap();

  // (4) scalar solve: (1/dt - div kappa_eff grad) theta^{n+1} = rhs
  CellScalarField theta_new(grid_);
  {
    CellScalarField rhs(grid_);
    const double idt = 1.0 / dt;
    pool_.for_each(0, nz, [&](int k) {
      for (int j = 0; j < ny; ++j) {
        const double* th = st.theta.row(j, k);
        const double* ad = tend_th.row(j, k);
        double* r = rhs.row(j, k);
        for (int i = 0; i < nx; ++i) r[i] = th[i] * idt + ad[i];
      }
    });
    if (cfg_.wall_model_on) {
      std::vector<double> q;
      surface_heat_flux(th1, u1, v1, st.surface, most_, q);
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          rhs(i, j, 0) -= q[std::size_t(j) * nx + i] / grid_.dz;
    }
    // top: prescribed-gradient heat flux consistent with the inversion lapse
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        rhs(i, j, nz - 1) += kappa_eff(i, j, nz - 1) * cfg_.lapse / grid_.dz;

    HelmholtzBC bc; // zero-flux operator walls; fluxes are in the RHS
    HelmholtzResult hr =
        helmholtz_solve(idt, kappa_eff, rhs, bc, cfg_.helmholtz_tol, grid_,
                        pool_, cfg_.max_krylov, &st.theta);
    theta_new = std::move(hr.x);
    tm.theta_iters = hr.stats.iterations;
  }
  tm.scalar_solve = t.lap();

  // (5) velocity solves with sources at n+1/2
  {
    const CellScalarField buoy = boussinesq_source(
        st.theta, theta_new, cfg_.theta0, most_.gravity, grid_, pool_);
    const double idt = 1.0 / dt;
    CellScalarField rhs_u(grid_), rhs_v(grid_), rhs_w(grid_);
    pool_.for_each(0, nz, [&](int k) {
      const double mx = sgs.mean_tend_x.value.empty() ? 0.0
                                                      : sgs.mean_tend_x.value[k];
      const double my = sgs.mean_tend_y.value.empty() ? 0.0
                                                      : sgs.mean_tend_y.value[k];
      const double mz = sgs.mean_tend_z.value.empty() ? 0.0
                                                      : sgs.mean_tend_z.value[k];
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          rhs_u(i, j, k) = st.u.x(i, j, k) * idt + tend_u.x(i, j, k) +
                           cfg_.coriolis_f * (st.u.y(i, j, k) - cfg_.v_geo) -
                           st.gp.x(i, j, k) / rho + mx;
          rhs_v(i, j, k) = st.u.y(i, j, k) * idt + tend_u.y(i, j, k) -
                           cfg_.coriolis_f * (st.u.x(i, j, k) - cfg_.u_geo) -
                           st.gp.y(i, j, k) / rho + my;
          rhs_w(i, j, k) = st.u.z(i, j, k) * idt + tend_u.z(i, j, k) +
                           buoy(i, j, k) - st.gp.z(i, j, k) / rho + mz;
        }
    });
    if (cfg_.wall_model_on) {
      std::vector<double> t13, t23;
      moeng_stress(u1, v1, st.surface, t13, t23);
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          rhs_u(i, j, 0) -= t13[std::size_t(j) * nx + i] / grid_.dz;
          rhs_v(i, j, 0) -= t23[std::size_t(j) * nx + i] / grid_.dz;
        }
    }
    HelmholtzBC bc_uv; // zero tangential flux walls (stress in the RHS)
    HelmholtzBC bc_w;
    bc_w.bottom = HelmholtzBC::Dirichlet;
    bc_w.top = HelmholtzBC::Dirichlet;
    HelmholtzResult hu =
        helmholtz_solve(idt, sgs.nu_eff, rhs_u, bc_uv, cfg_.helmholtz_tol,
                        grid_, pool_, cfg_.max_krylov, &st.u.x);
    HelmholtzResult hv =
        helmholtz_solve(idt, sgs.nu_eff, rhs_v, bc_uv, cfg_.helmholtz_tol,
                        grid_, pool_, cfg_.max_krylov, &st.u.y);
    HelmholtzResult hw =
        helmholtz_solve(idt, sgs.nu_eff, rhs_w, bc_w, cfg_.helmholtz_tol,
                        grid_, pool_, cfg_.max_krylov, &st.u.z);
    tm.vel_iters_mean = (hu.stats.iterations + hv.stats.iterations +
                         hw.stats.iterations) / 3.0;
    st.u.x = std::move(hu.x);
    st.u.y = std::move(hv.x);
    st.u.z = std::move(hw.x);
    st.theta = std::move(theta_new);
  }
  tm.velocity_solve = t.lap();

  // (6) nodal projection: u* -> u^{n+1}, p^{n+1/2}, grad p
  {
    const SolveStats ns = nodal_->project(st.u, st.p, st.gp, rho, dt,
                                          cfg_.nodal_tol, cfg_.max_vcycles);
    tm.nodal_vcycles = ns.iterations;
  }
  tm.pressure_solve = t.lap();

  // (7) diagnostics
  {
    tm.nodal_div_norm = nodal_->divergence_norm(st.u);
    std::vector<double> mins(nz), maxs(nz);
    pool_.for_each(0, nz, [&](int k) {
      double lo = st.theta(0, 0, k), hi = lo;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const double v = st.theta(i, j, k);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      mins[k] = lo;
      maxs[k] = hi;
    });
    tm.theta_min = *std::min_element(mins.begin(), mins.end());
    tm.theta_max = *std::max_element(maxs.begin(), maxs.end());
    std::vector<double> thn;
    extract_plane(st.theta, 0, thn);
    tm.theta_bar_z1 = plane_mean(thn);
  }
  tm.diagnostics = t.lap();

  st.t += dt;
  st.step_index += 1;
  tm.total = now_s() - step_t0;
  tm.other = tm.total - (tm.fillpatch + tm.sgs_wall + tm.advection +
                         tm.mac_projection + tm.scalar_solve +
                         tm.velocity_solve + tm.pressure_solve +
                         tm.diagnostics);
  return tm;
}

} // namespace ablmini
