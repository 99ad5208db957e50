#include "ablmini/mg_poisson.hpp"

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
} // namespace

CellPoissonMG::CellPoissonMG(const GridSpec& grid, WorkerPool& pool)
    : pool_(pool) {
  int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  double dx = grid.dx, dy = grid.dy, dz = grid.dz;
  for (;;) {
    Level L;
    L.nx = nx; L.ny = ny; L.nz = nz;
    L.dx = dx; L.dy = dy; L.dz = dz;
    L.x = CellScalarField(nx, ny, nz, 1);
    L.b = CellScalarField(nx, ny, nz, 1);
    L.r = CellScalarField(nx, ny, nz, 1);
    levels_.push_back(std::move(L));
    if (nx % 2 || ny % 2 || nz % 2 || nx / 2 < 4 || ny / 2 < 4 || nz / 2 < 4)
      break;
    nx /= 2; ny /= 2; nz /= 2;
    dx *= 2; dy *= 2; dz *= 2;
  }
}

void CellPoissonMG::fill_wrap(CellScalarField& f, const Level& L) {
  const int nx = L.nx, ny = L.ny, nz = L.nz;
  pool_.for_each(0, nz, [&](int k) {
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

void CellPoissonMG::apply_level(Level& L, const CellScalarField& x,
                                CellScalarField& out, double coef) {
  const auto& K = kern::active();
  const double cx = coef / (L.dx * L.dx);
  const double cy = coef / (L.dy * L.dy);
  const double cz = coef / (L.dz * L.dz);
  pool_.for_each(0, L.nz, [&](int k) {
    const double czm = k > 0 ? cz : 0.0;
    const double czp = k < L.nz - 1 ? cz : 0.0;
    const double cc = -(2 * cx + 2 * cy + czm + czp);
    for (int j = 0; j < L.ny; ++j) {
      K.cc7_row(x.row(j, k), x.row(j - 1, k), x.row(j + 1, k),
                x.row(j, k - 1), x.row(j, k + 1), cc, cx, cy, czm, czp,
                out.row(j, k), L.nx);
    }
  });
}

void CellPoissonMG::smooth(Level& L, double coef, int sweeps) {
  const double cx = coef / (L.dx * L.dx);
  const double cy = coef / (L.dy * L.dy);
  const double cz = coef / (L.dz * L.dz);
  for (int s = 0; s < sweeps; ++s) {
    for (int color = 0; color < 2; ++color) {
      fill_wrap(L.x, L);
      pool_.for_each(0, L.nz, [&](int k) {
        const double czm = k > 0 ? cz : 0.0;
        const double czp = k < L.nz - 1 ? cz : 0.0;
        const double diag = -(2 * cx + 2 * cy + czm + czp);
        for (int j = 0; j < L.ny; ++j) {
          double* x = L.x.row(j, k);
          const double* ym = L.x.row(j - 1, k);
          const double* yp = L.x.row(j + 1, k);
          const double* zm = L.x.row(j, k - 1);
          const double* zp = L.x.row(j, k + 1);
          const double* b = L.b.row(j, k);
          for (int i = (j + k + color) & 1; i < L.nx; i += 2) {
            const double off = cx * (x[i - 1] + x[i + 1]) +
                               cy * (ym[i] + yp[i]) + czm * zm[i] +
                               czp * zp[i];
            x[i] = (b[i] - off) / diag;
          }
        }
      });
    }
  }
}

void CellPoissonMG::residual(Level& L, double coef) {
  fill_wrap(L.x, L);
  apply_level(L, L.x, L.r, coef);
  pool_.for_each(0, L.nz, [&](int k) {
    for (int j = 0; j < L.ny; ++j) {
      double* r = L.r.row(j, k);
      const double* b = L.b.row(j, k);
      for (int i = 0; i < L.nx; ++i) r[i] = b[i] - r[i];
    }
  });
}

void CellPoissonMG::restrict_to(const Level& fine, Level& coarse) {
  pool_.for_each(0, coarse.nz, [&](int kc) {
    for (int jc = 0; jc < coarse.ny; ++jc)
      for (int ic = 0; ic < coarse.nx; ++ic) {
        double s = 0.0;
        for (int dk = 0; dk < 2; ++dk)
          for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di)
              s += fine.r(2 * ic + di, 2 * jc + dj, 2 * kc + dk);
        coarse.b(ic, jc, kc) = 0.125 * s;
      }
  });
}

void CellPoissonMG::prolong_add(const Level& coarse, Level& fine) {
  pool_.for_each(0, fine.nz, [&](int k) {
    for (int j = 0; j < fine.ny; ++j) {
      double* x = fine.x.row(j, k);
      const double* e = coarse.x.row(j / 2, k / 2);
      for (int i = 0; i < fine.nx; ++i) x[i] += e[i / 2];
    }
  });
}

double CellPoissonMG::norm2(const CellScalarField& f, const Level& L) {
  const auto& K = kern::active();
  std::vector<double> level(L.nz);
  pool_.for_each(0, L.nz, [&](int k) {
    std::vector<double> rows(L.ny);
    for (int j = 0; j < L.ny; ++j) rows[j] = K.sumsq(f.row(j, k), L.nx);
    level[k] = kern::pairwise_combine(rows.data(), L.ny);
  });
  return std::sqrt(kern::pairwise_combine(level.data(), L.nz));
}

void CellPoissonMG::pin_mean(CellScalarField& f, const Level& L) {
  const auto& K = kern::active();
  std::vector<double> level(L.nz);
  pool_.for_each(0, L.nz, [&](int k) {
    std::vector<double> rows(L.ny);
    for (int j = 0; j < L.ny; ++j) rows[j] = K.row_sum(f.row(j, k), L.nx);
    level[k] = kern::pairwise_combine(rows.data(), L.ny);
  });
  const double mean = kern::pairwise_combine(level.data(), L.nz) /
                      (double(L.nx) * L.ny * L.nz);
  pool_.for_each(0, L.nz, [&](int k) {
    for (int j = 0; j < L.ny; ++j) {
      double* x = f.row(j, k);
      for (int i = 0; i < L.nx; ++i) x[i] -= mean;
    }
  });
}

void CellPoissonMG::coarse_solve(Level& L, double coef) {
  // CG on the (singular) coarsest level; RHS and iterates kept mean-free.
  pin_mean(L.b, L);
  L.x.fill(0.0);
  CellScalarField p(L.nx, L.ny, L.nz, 1), Ap(L.nx, L.ny, L.nz, 1);
  residual(L, coef); // r = b
  double rr = 0.0;
  {
    const double n = norm2(L.r, L);
    rr = n * n;
  }
  const double b2 = rr;
  if (b2 == 0.0) return;
  // p = r
  pool_.for_each(0, L.nz, [&](int k) {
    for (int j = 0; j < L.ny; ++j) {
      double* pr = p.row(j, k);
      const double* r = L.r.row(j, k);
      for (int i = 0; i < L.nx; ++i) pr[i] = r[i];
    }
  });
  for (int it = 0; it < 500; ++it) {
    fill_wrap(p, L);
    apply_level(L, p, Ap, coef);
    const auto& K = kern::active();
    std::vector<double> lv(L.nz);
    pool_.for_each(0, L.nz, [&](int k) {
      std::vector<double> rows(L.ny);
      for (int j = 0; j < L.ny; ++j) rows[j] = K.dot(p.row(j, k), Ap.row(j, k), L.nx);
      lv[k] = kern::pairwise_combine(rows.data(), L.ny);
    });
    const double pAp = kern::pairwise_combine(lv.data(), L.nz);
    if (pAp == 0.0) break;
    const double alpha = rr / pAp;
    pool_.for_each(0, L.nz, [&](int k) {
      for (int j = 0; j < L.ny; ++j) {
        K.axpy(alpha, p.row(j, k), L.x.row(j, k), L.nx);
        K.axpy(-alpha, Ap.row(j, k), L.r.row(j, k), L.nx);
      }
    });
    const double rn = norm2(L.r, L);
    const double rr_new = rn * rn;
    if (rr_new <= 1e-24 * b2) break;
    const double beta = rr_new / rr;
    rr = rr_new;
    pool_.for_each(0, L.nz, [&](int k) {
      for (int j = 0; j < L.ny; ++j) {
        K.axpby(1.0, L.r.row(j, k), beta, p.row(j, k), L.nx);
      }
    });
  }
  pin_mean(L.x, L);
}

void CellPoissonMG::vcycle(int l, double coef) {
  Level& L = levels_[l];
  if (l + 1 == static_cast<int>(levels_.size())) {
    coarse_solve(L, coef);
    return;
  }
  smooth(L, coef, 2);
  residual(L, coef);
  restrict_to(L, levels_[l + 1]);
  levels_[l + 1].x.fill(0.0);
  vcycle(l + 1, coef);
  prolong_add(levels_[l + 1], L);
  smooth(L, coef, 2);
}

SolveStats CellPoissonMG::solve(CellScalarField& x, const CellScalarField& b,
                                double coef, double tol, int max_vcycles) {
  const double t0 = now_s();
  Level& L0 = levels_[0];
  pool_.for_each(0, L0.nz, [&](int k) {
    for (int j = 0; j < L0.ny; ++j) {
      const double* bs = b.row(j, k);
      const double* xs = x.row(j, k);
      double* bd = L0.b.row(j, k);
      double* xd = L0.x.row(j, k);
      for (int i = 0; i < L0.nx; ++i) {
        bd[i] = bs[i];
        xd[i] = xs[i];
      }
    }
  });
  pin_mean(L0.b, L0);

  SolveStats stats;
  const double b2 = norm2(L0.b, L0);
  if (b2 == 0.0) {
    L0.x.fill(0.0);
    stats.converged = true;
  } else {
    residual(L0, coef);
    double prev = norm2(L0.r, L0);
    for (int cyc = 0; cyc < max_vcycles; ++cyc) {
      vcycle(0, coef);
      ++stats.iterations;
      residual(L0, coef);
      const double rn = norm2(L0.r, L0);
      last_factor_ = prev > 0 ? rn / prev : 0.0;
      prev = rn;
      stats.final_relative_residual = rn / b2;
      if (stats.final_relative_residual <= tol) {
        stats.converged = true;
        break;
      }
    }
    pin_mean(L0.x, L0);
  }
  pool_.for_each(0, L0.nz, [&](int k) {
    for (int j = 0; j < L0.ny; ++j) {
      const double* xs = L0.x.row(j, k);
      double* xd = x.row(j, k);
      for (int i = 0; i < L0.nx; ++i) xd[i] = xs[i];
    }
  });
  stats.wall_time = now_s() - t0;
  return stats;
}

void CellPoissonMG::apply(const CellScalarField& x, CellScalarField& out,
                          double coef) {
  Level& L0 = levels_[0];
  pool_.for_each(0, L0.nz, [&](int k) {
    for (int j = 0; j < L0.ny; ++j) {
      const double* xs = x.row(j, k);
      double* xd = L0.x.row(j, k);
      for (int i = 0; i < L0.nx; ++i) xd[i] = xs[i];
    }
  });
  fill_wrap(L0.x, L0);
  apply_level(L0, L0.x, L0.r, coef);
  pool_.for_each(0, L0.nz, [&](int k) {
    for (int j = 0; j < L0.ny; ++j) {
      const double* rs = L0.r.row(j, k);
      double* od = out.row(j, k);
      for (int i = 0; i < L0.nx; ++i) od[i] = rs[i];
    }
  });
}

std::pair<double, double> CellPoissonMG::transfer_adjoint_pair(
    int level, const std::vector<double>& vf, const std::vector<double>& wc) {
  Level& F = levels_[level];
  Level& C = levels_[level + 1];
  std::size_t n = 0;
  for (int k = 0; k < F.nz; ++k)
    for (int j = 0; j < F.ny; ++j)
      for (int i = 0; i < F.nx; ++i) F.r(i, j, k) = vf[n++];
  restrict_to(F, C);
  double rvw = 0.0;
  n = 0;
  for (int k = 0; k < C.nz; ++k)
    for (int j = 0; j < C.ny; ++j)
      for (int i = 0; i < C.nx; ++i) rvw += C.b(i, j, k) * wc[n++];
  // P w into a zeroed fine iterate
  n = 0;
  for (int k = 0; k < C.nz; ++k)
    for (int j = 0; j < C.ny; ++j)
      for (int i = 0; i < C.nx; ++i) C.x(i, j, k) = wc[n++];
  F.x.fill(0.0);
  prolong_add(C, F);
  double vPw = 0.0;
  n = 0;
  for (int k = 0; k < F.nz; ++k)
    for (int j = 0; j < F.ny; ++j)
      for (int i = 0; i < F.nx; ++i) vPw += vf[n++] * F.x(i, j, k);
  return {8.0 * rvw, vPw};
}

MacProjectResult mac_project(FaceVelocitySet& f, const GridSpec& grid,
                             double rho, double tol, CellPoissonMG& mg,
                             WorkerPool& pool, int max_vcycles,
                             const CellScalarField* psi0) {
  if (rho <= 0) throw std::invalid_argument("mac_project: rho must be positive");
  if (tol <= 0 || tol >= 1)
    throw std::invalid_argument("mac_project: tol must be in (0,1)");
  MacProjectResult res;
  CellScalarField b = divergence_mac(f, grid, pool);
  res.input_div_norm = interior_norm2(b, grid, pool);
  res.psi = psi0 ? *psi0 : CellScalarField(grid);
  const double coef = 1.0 / rho;
  res.stats = mg.solve(res.psi, b, coef, tol, max_vcycles);
  if (!res.stats.converged)
    throw SolveFailure("mac_project: multigrid did not converge", res.stats);

  // subtract (1/rho) grad psi on faces; wall faces in z stay untouched
  const double cx = coef / grid.dx, cy = coef / grid.dy, cz = coef / grid.dz;
  auto& psi = res.psi;
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j) {
      f.u(0, j, k) -= cx * (psi(0, j, k) - psi(grid.nx - 1, j, k));
      for (int i = 1; i < grid.nx; ++i)
        f.u(i, j, k) -= cx * (psi(i, j, k) - psi(i - 1, j, k));
    }
    for (int i = 0; i < grid.nx; ++i) {
      f.v(i, 0, k) -= cy * (psi(i, 0, k) - psi(i, grid.ny - 1, k));
      for (int j = 1; j < grid.ny; ++j)
        f.v(i, j, k) -= cy * (psi(i, j, k) - psi(i, j - 1, k));
    }
    if (k >= 1)
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
          f.w(i, j, k) -= cz * (psi(i, j, k) - psi(i, j, k - 1));
  });
  f.sync_periodic(grid);
  CellScalarField d = divergence_mac(f, grid, pool);
  res.output_div_norm = interior_norm2(d, grid, pool);
  return res;
}

} // namespace ablmini
