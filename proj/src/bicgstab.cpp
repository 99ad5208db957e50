#include "ablmini/bicgstab.hpp"

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

struct Work {
  const GridSpec& grid;
  WorkerPool& pool;
  double alpha;
  double ihx2, ihy2, ihz2;
  HelmholtzBC bc;
  CellScalarField beta; // padded copy with periodic wrap filled

  Work(double a, const CellScalarField& b, const HelmholtzBC& bc_,
       const GridSpec& g, WorkerPool& p)
      : grid(g), pool(p), alpha(a), bc(bc_), beta(g.nx, g.ny, g.nz, 1) {
    ihx2 = 1.0 / (g.dx * g.dx);
    ihy2 = 1.0 / (g.dy * g.dy);
    ihz2 = 1.0 / (g.dz * g.dz);
    pool.for_each(0, g.nz, [&](int k) {
      for (int j = 0; j < g.ny; ++j) {
        const double* s = b.row(j, k);
        double* d = beta.row(j, k);
        for (int i = 0; i < g.nx; ++i) d[i] = s[i];
      }
    });
    wrap(beta);
    // z ghost planes mirror the wall cell so unused wall-face averages stay
    // finite
    pool.for_each(0, 1, [&](int) {
      for (int j = -1; j <= g.ny; ++j)
        for (int i = -1; i <= g.nx; ++i) {
          beta(i, j, -1) = beta(i, j, 0);
          beta(i, j, g.nz) = beta(i, j, g.nz - 1);
        }
    });
  }

  void wrap(CellScalarField& f) const {
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    pool.for_each(0, nz, [&](int k) {
      for (int j = 0; j < ny; ++j) {
        f(-1, j, k) = f(nx - 1, j, k);
        f(nx, j, k) = f(0, j, k);
      }
      for (int i = -1; i <= nx; ++i) {
        f(i, -1, k) = f(i, ny - 1, k);
        f(i, ny, k) = f(i, 0, k);
      }
    });
  }

  void row_gates(int k, double& szm, double& szp, double& dz_extra) const {
    szm = k > 0 ? 1.0 : 0.0;
    szp = k < grid.nz - 1 ? 1.0 : 0.0;
    dz_extra = 0.0;
    if (k == 0 && bc.bottom == HelmholtzBC::Dirichlet)
      dz_extra += 2.0 * ihz2;
    if (k == grid.nz - 1 && bc.top == HelmholtzBC::Dirichlet)
      dz_extra += 2.0 * ihz2;
  }

  void apply(CellScalarField& x, CellScalarField& out) {
    wrap(x);
    const auto& K = kern::active();
    pool.for_each(0, grid.nz, [&](int k) {
      double szm, szp, dz_extra;
      row_gates(k, szm, szp, dz_extra);
      for (int j = 0; j < grid.ny; ++j) {
        K.helm7_row(x.row(j, k), x.row(j - 1, k), x.row(j + 1, k),
                    x.row(j, k - 1), x.row(j, k + 1), beta.row(j, k),
                    beta.row(j - 1, k), beta.row(j + 1, k), beta.row(j, k - 1),
                    beta.row(j, k + 1), alpha, ihx2, ihy2, ihz2, szm, szp,
                    dz_extra, out.row(j, k), grid.nx);
      }
    });
  }

  void jacobi_diag(CellScalarField& d) {
    pool.for_each(0, grid.nz, [&](int k) {
      double szm, szp, dz_extra;
      row_gates(k, szm, szp, dz_extra);
      for (int j = 0; j < grid.ny; ++j) {
        const double* b = beta.row(j, k);
        const double* bym = beta.row(j - 1, k);
        const double* byp = beta.row(j + 1, k);
        const double* bzm = beta.row(j, k - 1);
        const double* bzp = beta.row(j, k + 1);
        double* dd = d.row(j, k);
        for (int i = 0; i < grid.nx; ++i) {
          const double bi = b[i];
          dd[i] = alpha + dz_extra * bi +
                  ihx2 * (0.5 * (bi + b[i - 1]) + 0.5 * (bi + b[i + 1])) +
                  ihy2 * (0.5 * (bi + bym[i]) + 0.5 * (bi + byp[i])) +
                  ihz2 * (szm * 0.5 * (bi + bzm[i]) + szp * 0.5 * (bi + bzp[i]));
        }
      }
    });
  }

  double dot(const CellScalarField& a, const CellScalarField& b2) {
    const auto& K = kern::active();
    std::vector<double> lv(grid.nz);
    pool.for_each(0, grid.nz, [&](int k) {
      std::vector<double> rows(grid.ny);
      for (int j = 0; j < grid.ny; ++j)
        rows[j] = K.dot(a.row(j, k), b2.row(j, k), grid.nx);
      lv[k] = kern::pairwise_combine(rows.data(), grid.ny);
    });
    return kern::pairwise_combine(lv.data(), grid.nz);
  }

  double norm(const CellScalarField& a) { return std::sqrt(dot(a, a)); }

  // elementwise: out = a per-row op; helpers over interior
  template <typename F>
  void each_row(F&& f) {
    pool.for_each(0, grid.nz, [&](int k) {
      for (int j = 0; j < grid.ny; ++j) f(j, k);
    });
  }
};

} // namespace

void helmholtz_apply(double alpha, const CellScalarField& beta,
                     const CellScalarField& x, CellScalarField& out,
                     const HelmholtzBC& bc, const GridSpec& grid,
                     WorkerPool& pool) {
  Work w(alpha, beta, bc, grid, pool);
  CellScalarField xi(grid.nx, grid.ny, grid.nz, 1);
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j) {
      const double* s = x.row(j, k);
      double* d = xi.row(j, k);
      for (int i = 0; i < grid.nx; ++i) d[i] = s[i];
    }
  });
  CellScalarField oi(grid.nx, grid.ny, grid.nz, 1);
  w.apply(xi, oi);
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j) {
      const double* s = oi.row(j, k);
      double* d = out.row(j, k);
      for (int i = 0; i < grid.nx; ++i) d[i] = s[i];
    }
  });
}

HelmholtzResult helmholtz_solve(double alpha, const CellScalarField& beta,
                                const CellScalarField& rhs,
                                const HelmholtzBC& bc, double tol,
                                const GridSpec& grid, WorkerPool& pool,
                                int max_iterations, const CellScalarField* x0) {
  if (alpha <= 0)
    throw std::invalid_argument("helmholtz_solve: alpha must be positive");
  const double t0 = now_s();
  Work w(alpha, beta, bc, grid, pool);
  const auto& K = kern::active();
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;

  CellScalarField x(nx, ny, nz, 1), r(nx, ny, nz, 1), rt(nx, ny, nz, 1);
  CellScalarField p(nx, ny, nz, 1), v(nx, ny, nz, 1), s(nx, ny, nz, 1);
  CellScalarField t(nx, ny, nz, 1), y(nx, ny, nz, 1), z(nx, ny, nz, 1);
  CellScalarField diag(nx, ny, nz, 1);
  w.jacobi_diag(diag);

  if (x0) {
    pool.for_each(0, nz, [&](int k) {
      for (int j = 0; j < ny; ++j) K.copy(x0->row(j, k), x.row(j, k), nx);
    });
    w.apply(x, r);
    w.each_row([&](int j, int k) {
      const double* b = rhs.row(j, k);
      double* rr = r.row(j, k);
      for (int i = 0; i < nx; ++i) rr[i] = b[i] - rr[i];
    });
  } else {
    w.each_row([&](int j, int k) { K.copy(rhs.row(j, k), r.row(j, k), nx); });
  }
  w.each_row([&](int j, int k) { K.copy(r.row(j, k), rt.row(j, k), nx); });

  SolveStats stats;
  const double bnorm = [&] {
    std::vector<double> lv(nz);
    pool.for_each(0, nz, [&](int k) {
      std::vector<double> rows(ny);
      for (int j = 0; j < ny; ++j) rows[j] = K.sumsq(rhs.row(j, k), nx);
      lv[k] = kern::pairwise_combine(rows.data(), ny);
    });
    return std::sqrt(kern::pairwise_combine(lv.data(), nz));
  }();
  if (bnorm == 0.0) {
    stats.converged = true;
    stats.wall_time = now_s() - t0;
    HelmholtzResult res{CellScalarField(grid), stats};
    return res;
  }
  const double target = tol * bnorm;

  auto precond = [&](const CellScalarField& in, CellScalarField& out) {
    w.each_row([&](int j, int k) {
      const double* a = in.row(j, k);
      const double* d = diag.row(j, k);
      double* o = out.row(j, k);
      for (int i = 0; i < nx; ++i) o[i] = a[i] / d[i];
    });
  };

  double rho = 1.0, a_coef = 1.0, omega = 1.0;
  double rnorm = w.norm(r);
  bool restarted = false;
  bool first = true;

  for (int it = 1; it <= max_iterations; ++it) {
    stats.iterations = it;
    const double rho_new = w.dot(rt, r);
    if (std::abs(rho_new) < 1e-300 * bnorm * bnorm ||
        (!first && std::abs(rho_new) < 1e-60 * rnorm * rnorm)) {
      if (restarted) {
        stats.final_relative_residual = rnorm / bnorm;
        stats.wall_time = now_s() - t0;
        throw SolveFailure("helmholtz_solve: BiCGStab breakdown", stats);
      }
      restarted = true;
      w.each_row([&](int j, int k) { K.copy(r.row(j, k), rt.row(j, k), nx); });
      rho = 1.0; a_coef = 1.0; omega = 1.0;
      first = true;
      continue;
    }
    if (first) {
      w.each_row([&](int j, int k) { K.copy(r.row(j, k), p.row(j, k), nx); });
      first = false;
    } else {
      const double beta_c = (rho_new / rho) * (a_coef / omega);
      // p = r + beta*(p - omega*v)
      w.each_row([&](int j, int k) {
        double* pp = p.row(j, k);
        const double* rr = r.row(j, k);
        const double* vv = v.row(j, k);
        for (int i = 0; i < nx; ++i)
          pp[i] = rr[i] + beta_c * (pp[i] - omega * vv[i]);
      });
    }
    precond(p, y);
    w.apply(y, v);
    const double rtv = w.dot(rt, v);
    if (rtv == 0.0) {
      stats.final_relative_residual = rnorm / bnorm;
      stats.wall_time = now_s() - t0;
      throw SolveFailure("helmholtz_solve: BiCGStab breakdown (rt'v=0)", stats);
    }
    a_coef = rho_new / rtv;
    // s = r - a v; x += a y
    w.each_row([&](int j, int k) {
      const double* rr = r.row(j, k);
      const double* vv = v.row(j, k);
      double* ss = s.row(j, k);
      for (int i = 0; i < nx; ++i) ss[i] = rr[i] - a_coef * vv[i];
      K.axpy(a_coef, y.row(j, k), x.row(j, k), nx);
    });
    const double snorm = w.norm(s);
    if (snorm <= target) {
      w.each_row([&](int j, int k) { K.copy(s.row(j, k), r.row(j, k), nx); });
      rnorm = snorm;
      stats.converged = true;
      break;
    }
    precond(s, z);
    w.apply(z, t);
    const double tt = w.dot(t, t);
    if (tt == 0.0) {
      stats.final_relative_residual = snorm / bnorm;
      stats.wall_time = now_s() - t0;
      throw SolveFailure("helmholtz_solve: BiCGStab breakdown (t=0)", stats);
    }
    omega = w.dot(t, s) / tt;
    w.each_row([&](int j, int k) {
      K.axpy(omega, z.row(j, k), x.row(j, k), nx);
      const double* ss = s.row(j, k);
      const double* ttr = t.row(j, k);
      double* rr = r.row(j, k);
      for (int i = 0; i < nx; ++i) rr[i] = ss[i] - omega * ttr[i];
    });
    rnorm = w.norm(r);
    if (rnorm <= target) {
      stats.converged = true;
      break;
    }
    rho = rho_new;
  }
  stats.final_relative_residual = rnorm / bnorm;
  stats.wall_time = now_s() - t0;
  if (!stats.converged)
    throw SolveFailure("helmholtz_solve: no convergence within max iterations",
                       stats);

  HelmholtzResult res{CellScalarField(grid), stats};
  pool.for_each(0, nz, [&](int k) {
    for (int j = 0; j < ny; ++j) K.copy(x.row(j, k), res.x.row(j, k), nx);
  });
  return res;
}

} // namespace ablmini
