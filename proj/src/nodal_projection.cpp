#include "ablmini/nodal_projection.hpp"

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

// trilinear element stiffness on a dx*dy*dz brick, 2x2x2 Gauss (exact for
// these integrands); corner index a = (az*2+ay)*2+ax
void element_stiffness(double dx, double dy, double dz, double K[8][8]) {
  const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) K[a][b] = 0.0;
  for (int qx = 0; qx < 2; ++qx)
    for (int qy = 0; qy < 2; ++qy)
      for (int qz = 0; qz < 2; ++qz) {
        const double gx = gp[qx], gy = gp[qy], gz = gp[qz];
        double grad[8][3];
        for (int a = 0; a < 8; ++a) {
          const int ax = a & 1, ay = (a >> 1) & 1, az = (a >> 2) & 1;
          const double sx = ax ? gx : 1 - gx, dsx = (ax ? 1.0 : -1.0) / dx;
          const double sy = ay ? gy : 1 - gy, dsy = (ay ? 1.0 : -1.0) / dy;
          const double sz = az ? gz : 1 - gz, dsz = (az ? 1.0 : -1.0) / dz;
          grad[a][0] = dsx * sy * sz;
          grad[a][1] = sx * dsy * sz;
          grad[a][2] = sx * sy * dsz;
        }
        const double w = dx * dy * dz / 8.0;
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b)
            K[a][b] += w * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1] +
                            grad[a][2] * grad[b][2]);
      }
}

} // namespace

NodalProjection::NodalProjection(const GridSpec& grid, WorkerPool& pool)
    : grid_(grid), pool_(pool), nx_(grid.nx), ny_(grid.ny), nz_(grid.nz) {
  int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  double dx = grid.dx, dy = grid.dy, dz = grid.dz;
  for (;;) {
    Level L;
    L.nx = nx; L.ny = ny; L.nz = nz;
    L.dx = dx; L.dy = dy; L.dz = dz;
    L.x = CellScalarField(nx, ny, nz + 1, 1);
    L.b = CellScalarField(nx, ny, nz + 1, 1);
    L.r = CellScalarField(nx, ny, nz + 1, 1);
    build_stencils(L);
    levels_.push_back(std::move(L));
    if (nx % 2 || ny % 2 || nz % 2 || nx / 2 < 4 || ny / 2 < 4 || nz / 2 < 4)
      break;
    nx /= 2; ny /= 2; nz /= 2;
    dx *= 2; dy *= 2; dz *= 2;
  }
}

void NodalProjection::build_stencils(Level& L) {
  double K[8][8];
  element_stiffness(L.dx, L.dy, L.dz, K);
  auto zero = [](auto& st) {
    for (auto& p : st)
      for (auto& r : p) r.fill(0.0);
  };
  zero(L.st_int);
  zero(L.st_bot);
  zero(L.st_top);
  // cells at offsets (ox,oy,oz) in {-1,0}^3 relative to the node; the node
  // is corner (-ox,-oy,-oz) of that cell
  for (int oz = -1; oz <= 0; ++oz)
    for (int oy = -1; oy <= 0; ++oy)
      for (int ox = -1; ox <= 0; ++ox) {
        const int a = ((-oz) * 2 + (-oy)) * 2 + (-ox);
        for (int b = 0; b < 8; ++b) {
          const int bx = b & 1, by = (b >> 1) & 1, bz = (b >> 2) & 1;
          const double v = K[a][b];
          L.st_int[oz + bz + 1][oy + by + 1][ox + bx + 1] += v;
          if (oz == 0) L.st_bot[oz + bz + 1][oy + by + 1][ox + bx + 1] += v;
          if (oz == -1) L.st_top[oz + bz + 1][oy + by + 1][ox + bx + 1] += v;
        }
      }
}

void NodalProjection::fill_wrap(CellScalarField& f, const Level& L) {
  const int nx = L.nx, ny = L.ny;
  pool_.for_each(0, L.nz + 1, [&](int k) {
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

void NodalProjection::apply_level(Level& L, const CellScalarField& x,
                                  CellScalarField& out, double coef) {
  const auto& K = kern::active();
  pool_.for_each(0, L.nz + 1, [&](int k) {
    const auto& st = k == 0 ? L.st_bot : (k == L.nz ? L.st_top : L.st_int);
    for (int j = 0; j < L.ny; ++j) {
      double* o = out.row(j, k);
      for (int i = 0; i < L.nx; ++i) o[i] = 0.0;
      for (int dz = -1; dz <= 1; ++dz) {
        if ((k == 0 && dz < 0) || (k == L.nz && dz > 0)) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          const auto& c = st[dz + 1][dy + 1];
          if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
          K.tri_row_acc(x.row(j + dy, k + dz), c[0], c[1], c[2], o, L.nx);
        }
      }
      if (coef != 1.0)
        for (int i = 0; i < L.nx; ++i) o[i] *= coef;
    }
  });
}

void NodalProjection::smooth(Level& L, double coef, int sweeps) {
  for (int s = 0; s < sweeps; ++s) {
    for (int color = 0; color < 8; ++color) {
      const int ci = color & 1, cj = (color >> 1) & 1, ck = (color >> 2) & 1;
      fill_wrap(L.x, L);
      pool_.for_each(0, (L.nz + 1 - ck + 1) / 2, [&](int kk) {
        const int k = 2 * kk + ck;
        if (k > L.nz) return;
        const auto& st = k == 0 ? L.st_bot : (k == L.nz ? L.st_top : L.st_int);
        const double diag = coef * st[1][1][1];
        for (int j = cj; j < L.ny; j += 2) {
          const double* b = L.b.row(j, k);
          double* xc = L.x.row(j, k);
          for (int i = ci; i < L.nx; i += 2) {
            double ax = 0.0;
            for (int dz = -1; dz <= 1; ++dz) {
              if ((k == 0 && dz < 0) || (k == L.nz && dz > 0)) continue;
              for (int dy = -1; dy <= 1; ++dy) {
                const auto& c = st[dz + 1][dy + 1];
                const double* r = L.x.row(j + dy, k + dz);
                ax += c[0] * r[i - 1] + c[1] * r[i] + c[2] * r[i + 1];
              }
            }
            ax *= coef;
            xc[i] += (b[i] - ax) / diag;
          }
        }
      });
    }
  }
}

void NodalProjection::residual(Level& L, double coef) {
  fill_wrap(L.x, L);
  apply_level(L, L.x, L.r, coef);
  pool_.for_each(0, L.nz + 1, [&](int k) {
    for (int j = 0; j < L.ny; ++j) {
      double* r = L.r.row(j, k);
      const double* b = L.b.row(j, k);
      for (int i = 0; i < L.nx; ++i) r[i] = b[i] - r[i];
    }
  });
}

void NodalProjection::restrict_to(const Level& fine, Level& coarse) {
  // exact transpose of trilinear prolongation (no volume factor: the
  // operator is in integral form and coarse spaces nest in fine ones)
  const double w[3] = {0.5, 1.0, 0.5};
  pool_.for_each(0, coarse.nz + 1, [&](int K) {
    for (int J = 0; J < coarse.ny; ++J)
      for (int I = 0; I < coarse.nx; ++I) {
        double s = 0.0;
        for (int dz = -1; dz <= 1; ++dz) {
          const int fk = 2 * K + dz;
          if (fk < 0 || fk > fine.nz) continue;
          for (int dy = -1; dy <= 1; ++dy) {
            int fj = 2 * J + dy;
            fj = fj < 0 ? fine.ny - 1 : (fj >= fine.ny ? 0 : fj);
            const double wzy = w[dz + 1] * w[dy + 1];
            for (int dx = -1; dx <= 1; ++dx) {
              int fi = 2 * I + dx;
              fi = fi < 0 ? fine.nx - 1 : (fi >= fine.nx ? 0 : fi);
              s += wzy * w[dx + 1] * fine.r(fi, fj, fk);
            }
          }
        }
        coarse.b(I, J, K) = s;
      }
  });
}

void NodalProjection::prolong_add(const Level& coarse, Level& fine) {
  pool_.for_each(0, fine.nz + 1, [&](int k) {
    const int K0 = k / 2;
    const bool kodd = k & 1;
    for (int j = 0; j < fine.ny; ++j) {
      const int J0 = j / 2;
      const int J1 = (j & 1) ? (J0 + 1) % coarse.ny : J0;
      for (int i = 0; i < fine.nx; ++i) {
        const int I0 = i / 2;
        const int I1 = (i & 1) ? (I0 + 1) % coarse.nx : I0;
        double v = 0.25 * (coarse.x(I0, J0, K0) + coarse.x(I1, J0, K0) +
                           coarse.x(I0, J1, K0) + coarse.x(I1, J1, K0));
        if (kodd) {
          const int K1 = K0 + 1;
          v = 0.5 * v +
              0.125 * (coarse.x(I0, J0, K1) + coarse.x(I1, J0, K1) +
                       coarse.x(I0, J1, K1) + coarse.x(I1, J1, K1));
        }
        fine.x(i, j, k) += v;
      }
    }
  });
}

double NodalProjection::norm2(const CellScalarField& f, const Level& L) {
  const auto& K = kern::active();
  std::vector<double> level(L.nz + 1);
  pool_.for_each(0, L.nz + 1, [&](int k) {
    std::vector<double> rows(L.ny);
    for (int j = 0; j < L.ny; ++j) rows[j] = K.sumsq(f.row(j, k), L.nx);
    level[k] = kern::pairwise_combine(rows.data(), L.ny);
  });
  return std::sqrt(kern::pairwise_combine(level.data(), L.nz + 1));
}

void NodalProjection::pin_mean(CellScalarField& f, const Level& L) {
  const auto& K = kern::active();
  std::vector<double> level(L.nz + 1);
  pool_.for_each(0, L.nz + 1, [&](int k) {
    std::vector<double> rows(L.ny);
    for (int j = 0; j < L.ny; ++j) rows[j] = K.row_sum(f.row(j, k), L.nx);
    level[k] = kern::pairwise_combine(rows.data(), L.ny);
  });
  const double mean = kern::pairwise_combine(level.data(), L.nz + 1) /
                      (double(L.nx) * L.ny * (L.nz + 1));
  pool_.for_each(0, L.nz + 1, [&](int k) {
    for (int j = 0; j < L.ny; ++j) {
      double* x = f.row(j, k);
      for (int i = 0; i < L.nx; ++i) x[i] -= mean;
    }
  });
}

void NodalProjection::coarse_solve(Level& L, double coef) {
  pin_mean(L.b, L);
  L.x.fill(0.0);
  CellScalarField p(L.nx, L.ny, L.nz + 1, 1), Ap(L.nx, L.ny, L.nz + 1, 1);
  residual(L, coef);
  double rr;
  {
    const double n = norm2(L.r, L);
    rr = n * n;
  }
  const double b2 = rr;
  if (b2 == 0.0) return;
  const auto& K = kern::active();
  pool_.for_each(0, L.nz + 1, [&](int k) {
    for (int j = 0; j < L.ny; ++j) K.copy(L.r.row(j, k), p.row(j, k), L.nx);
  });
  for (int it = 0; it < 1000; ++it) {
    fill_wrap(p, L);
    apply_level(L, p, Ap, coef);
    std::vector<double> lv(L.nz + 1);
    pool_.for_each(0, L.nz + 1, [&](int k) {
      std::vector<double> rows(L.ny);
      for (int j = 0; j < L.ny; ++j)
        rows[j] = K.dot(p.row(j, k), Ap.row(j, k), L.nx);
      lv[k] = kern::pairwise_combine(rows.data(), L.ny);
    });
    const double pAp = kern::pairwise_combine(lv.data(), L.nz + 1);
    if (pAp == 0.0) break;
    const double alpha = rr / pAp;
    pool_.for_each(0, L.nz + 1, [&](int k) {
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
    pool_.for_each(0, L.nz + 1, [&](int k) {
      for (int j = 0; j < L.ny; ++j)
        K.axpby(1.0, L.r.row(j, k), beta, p.row(j, k), L.nx);
    });
  }
  pin_mean(L.x, L);
}

void NodalProjection::vcycle(int l, double coef) {
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

std::vector<double> NodalProjection::divergence_nodal(
    const CellVectorField& u) {
  std::vector<double> d(unique_nodes(), 0.0);
  const double q4x = 0.25 / grid_.dx, q4y = 0.25 / grid_.dy,
               q4z = 0.25 / grid_.dz;
  const int nx = nx_, ny = ny_, nz = nz_;
  pool_.for_each(0, nz + 1, [&](int K) {
    const int klo = K - 1, khi = K;
    for (int J = 0; J < ny; ++J) {
      const int Jm = J == 0 ? ny - 1 : J - 1;
      for (int I = 0; I < nx; ++I) {
        const int Im = I == 0 ? nx - 1 : I - 1;
        double s = 0.0;
        // x differences across the node, averaged over (y,z) cell pairs
        for (int kk : {klo, khi}) {
          if (kk < 0 || kk >= nz) continue;
          s += q4x * (u.x(I, Jm, kk) - u.x(Im, Jm, kk));
          s += q4x * (u.x(I, J, kk) - u.x(Im, J, kk));
        }
        // y differences
        for (int kk : {klo, khi}) {
          if (kk < 0 || kk >= nz) continue;
          s += q4y * (u.y(Im, J, kk) - u.y(Im, Jm, kk));
          s += q4y * (u.y(I, J, kk) - u.y(I, Jm, kk));
        }
        // z differences; cells beyond the walls contribute zero
        const double wa0 = khi < nz ? u.z(Im, Jm, khi) : 0.0;
        const double wa1 = khi < nz ? u.z(I, Jm, khi) : 0.0;
        const double wa2 = khi < nz ? u.z(Im, J, khi) : 0.0;
        const double wa3 = khi < nz ? u.z(I, J, khi) : 0.0;
        const double wb0 = klo >= 0 ? u.z(Im, Jm, klo) : 0.0;
        const double wb1 = klo >= 0 ? u.z(I, Jm, klo) : 0.0;
        const double wb2 = klo >= 0 ? u.z(Im, J, klo) : 0.0;
        const double wb3 = klo >= 0 ? u.z(I, J, klo) : 0.0;
        s += q4z * ((wa0 - wb0) + (wa1 - wb1) + (wa2 - wb2) + (wa3 - wb3));
        d[(std::size_t(K) * ny + J) * nx + I] = s;
      }
    }
  });
  return d;
}

double NodalProjection::divergence_norm(const CellVectorField& u) {
  const std::vector<double> d = divergence_nodal(u);
  const auto& K = kern::active();
  return std::sqrt(K.sumsq(d.data(), static_cast<int>(d.size())));
}

void NodalProjection::gradient_cells(const std::vector<double>& phi,
                                     CellVectorField& g) {
  const int nx = nx_, ny = ny_, nz = nz_;
  auto node = [&](int i, int j, int k) -> double {
    if (i >= nx) i = 0;
    if (j >= ny) j = 0;
    return phi[(std::size_t(k) * ny + j) * nx + i];
  };
  const double q4x = 0.25 / grid_.dx, q4y = 0.25 / grid_.dy,
               q4z = 0.25 / grid_.dz;
  pool_.for_each(0, nz, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double gx = 0.0, gy = 0.0, gz = 0.0;
        for (int K = k; K <= k + 1; ++K)
          for (int J = j; J <= j + 1; ++J)
            gx += node(i + 1, J, K) - node(i, J, K);
        for (int K = k; K <= k + 1; ++K)
          for (int I = i; I <= i + 1; ++I)
            gy += node(I, j + 1, K) - node(I, j, K);
        for (int J = j; J <= j + 1; ++J)
          for (int I = i; I <= i + 1; ++I)
            gz += node(I, J, k + 1) - node(I, J, k);
        g.x(i, j, k) = q4x * gx;
        g.y(i, j, k) = q4y * gy;
        g.z(i, j, k) = q4z * gz;
      }
  });
}

void NodalProjection::apply_operator(const std::vector<double>& x,
                                     std::vector<double>& out, double coef) {
  Level& L0 = levels_[0];
  pool_.for_each(0, nz_ + 1, [&](int k) {
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        L0.x(i, j, k) = x[(std::size_t(k) * ny_ + j) * nx_ + i];
  });
  fill_wrap(L0.x, L0);
  apply_level(L0, L0.x, L0.r, coef);
  out.resize(unique_nodes());
  pool_.for_each(0, nz_ + 1, [&](int k) {
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        out[(std::size_t(k) * ny_ + j) * nx_ + i] = L0.r(i, j, k);
  });
}

SolveStats NodalProjection::project(CellVectorField& u, NodeScalarField& p,
                                    CellVectorField& gp, double rho, double dt,
                                    double tol, int max_vcycles) {
  if (dt <= 0) throw std::invalid_argument("nodal_project: dt must be positive");
  const double t0 = now_s();
  const double coef = dt / rho;
  const double dV = grid_.dx * grid_.dy * grid_.dz;
  const int nx = nx_, ny = ny_, nz = nz_;

  // w = u* + (dt/rho) gp_old
  CellVectorField w(grid_);
  pool_.for_each(0, nz, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        w.x(i, j, k) = u.x(i, j, k) + coef * gp.x(i, j, k);
        w.y(i, j, k) = u.y(i, j, k) + coef * gp.y(i, j, k);
        w.z(i, j, k) = u.z(i, j, k) + coef * gp.z(i, j, k);
      }
  });
  const std::vector<double> div = divergence_nodal(w);

  Level& L0 = levels_[0];
  pool_.for_each(0, nz + 1, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        L0.b(i, j, k) = -dV * div[(std::size_t(k) * ny + j) * nx + i];
        L0.x(i, j, k) = p(i, j, k); // warm start from the lagged pressure
      }
  });
  pin_mean(L0.b, L0);

  SolveStats stats;
  const double b2 = norm2(L0.b, L0);
  if (b2 == 0.0) {
    L0.x.fill(0.0);
    stats.converged = true;
  } else {
    for (int cyc = 0; cyc < max_vcycles; ++cyc) {
      vcycle(0, coef);
      ++stats.iterations;
      residual(L0, coef);
      stats.final_relative_residual = norm2(L0.r, L0) / b2;
      if (stats.final_relative_residual <= tol) {
        stats.converged = true;
        break;
      }
    }
    pin_mean(L0.x, L0);
  }
  stats.wall_time = now_s() - t0;
  if (!stats.converged)
    throw SolveFailure("nodal_project: multigrid did not converge", stats);

  // phi -> p (with periodic copies), gradient -> cells, velocity update
  std::vector<double> phi(unique_nodes());
  pool_.for_each(0, nz + 1, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        phi[(std::size_t(k) * ny + j) * nx + i] = L0.x(i, j, k);
  });
  pool_.for_each(0, nz + 1, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) p(i, j, k) = L0.x(i, j, k);
  });
  p.sync_periodic(grid_);

  CellVectorField gphi(grid_);
  gradient_cells(phi, gphi);
  pool_.for_each(0, nz, [&](int k) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        u.x(i, j, k) += coef * (gp.x(i, j, k) - gphi.x(i, j, k));
        u.y(i, j, k) += coef * (gp.y(i, j, k) - gphi.y(i, j, k));
        u.z(i, j, k) += coef * (gp.z(i, j, k) - gphi.z(i, j, k));
        gp.x(i, j, k) = gphi.x(i, j, k);
        gp.y(i, j, k) = gphi.y(i, j, k);
        gp.z(i, j, k) = gphi.z(i, j, k);
      }
  });
  stats.wall_time = now_s() - t0;
  return stats;
}

} // namespace ablmini
