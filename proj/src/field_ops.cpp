#include "ablmini/field_ops.hpp"

#include "ablmini/kernels.hpp"

#include <stdexcept>

namespace ablmini {

namespace {

void check_z_not_periodic(const BCSpec& bc) {
  if (bc.zlo.type == BCSide::Periodic || bc.zhi.type == BCSide::Periodic)
    throw std::invalid_argument("fill_ghost: periodic z is not supported for this case family");
}

// ghost value at layer m (1..g) from the mirror interior cell, given the
// side policy. h is the spacing along the axis; `sign` is -1 for the low
// side (ghost below boundary) and +1 for the high side.
inline double extend(BCSide::Type type, double bc_value, double mirror,
                     double h, int m, int sign) {
  switch (type) {
    case BCSide::Even: return mirror;
    case BCSide::OddValue: return 2.0 * bc_value - mirror;
    case BCSide::Gradient: return mirror + sign * bc_value * h * (2 * m - 1);
    default: return mirror;
  }
}

} // namespace

GridSpec build_grid(int nx, int ny, int nz, double Lx, double Ly, double Lz,
                    bool periodic_x, bool periodic_y, int ghost) {
  if (nx < 4 || ny < 4 || nz < 4)
    throw std::invalid_argument("build_grid: cell counts must be >= 4");
  if (Lx <= 0 || Ly <= 0 || Lz <= 0)
    throw std::invalid_argument("build_grid: domain lengths must be positive");
  if (ghost < 2)
    throw std::invalid_argument("build_grid: ghost width must be >= 2");
  GridSpec g;
  g.nx = nx; g.ny = ny; g.nz = nz;
  g.Lx = Lx; g.Ly = Ly; g.Lz = Lz;
  g.dx = Lx / nx; g.dy = Ly / ny; g.dz = Lz / nz;
  g.ghost = ghost;
  g.periodic_x = periodic_x;
  g.periodic_y = periodic_y;
  return g;
}

void FaceVelocitySet::sync_periodic(const GridSpec& grid) {
  if (grid.periodic_x)
    for (int k = 0; k < nz_; ++k)
      for (int j = 0; j < ny_; ++j) u(nx_, j, k) = u(0, j, k);
  if (grid.periodic_y)
    for (int k = 0; k < nz_; ++k)
      for (int i = 0; i < nx_; ++i) v(i, ny_, k) = v(i, 0, k);
}

void NodeScalarField::sync_periodic(const GridSpec& grid) {
  if (grid.periodic_x)
    for (int k = 0; k <= nz_; ++k)
      for (int j = 0; j <= ny_; ++j) (*this)(nx_, j, k) = (*this)(0, j, k);
  if (grid.periodic_y)
    for (int k = 0; k <= nz_; ++k)
      for (int i = 0; i <= nx_; ++i) (*this)(i, ny_, k) = (*this)(i, 0, k);
}

void fill_ghost(CellScalarField& f, const GridSpec& grid, const BCSpec& bc,
                WorkerPool& pool) {
  check_z_not_periodic(bc);
  const int g = f.ghost();
  const int nx = f.nx(), ny = f.ny(), nz = f.nz();

  // x then y then z so that edge/corner ghosts end up consistent
  pool.for_each(0, nz, [&](int k) {
    for (int j = 0; j < ny; ++j) {
      for (int m = 1; m <= g; ++m) {
        if (bc.xlo.type == BCSide::Periodic)
          f(-m, j, k) = f(nx - m, j, k);
        else
          f(-m, j, k) = extend(bc.xlo.type, bc.xlo.value, f(m - 1, j, k),
                               grid.dx, m, -1);
        if (bc.xhi.type == BCSide::Periodic)
          f(nx - 1 + m, j, k) = f(m - 1, j, k);
        else
          f(nx - 1 + m, j, k) = extend(bc.xhi.type, bc.xhi.value,
                                       f(nx - m, j, k), grid.dx, m, +1);
      }
    }
  });
  pool.for_each(0, nz, [&](int k) {
    for (int m = 1; m <= g; ++m) {
      for (int i = -g; i < nx + g; ++i) {
        if (bc.ylo.type == BCSide::Periodic)
          f(i, -m, k) = f(i, ny - m, k);
        else
          f(i, -m, k) = extend(bc.ylo.type, bc.ylo.value, f(i, m - 1, k),
                               grid.dy, m, -1);
        if (bc.yhi.type == BCSide::Periodic)
          f(i, ny - 1 + m, k) = f(i, m - 1, k);
        else
          f(i, ny - 1 + m, k) = extend(bc.yhi.type, bc.yhi.value,
                                       f(i, ny - m, k), grid.dy, m, +1);
      }
    }
  });
  for (int m = 1; m <= g; ++m) {
    pool.for_each(-g, ny + g, [&](int j) {
      for (int i = -g; i < nx + g; ++i) {
        f(i, j, -m) = extend(bc.zlo.type, bc.zlo.value, f(i, j, m - 1),
                             grid.dz, m, -1);
        f(i, j, nz - 1 + m) = extend(bc.zhi.type, bc.zhi.value,
                                     f(i, j, nz - m), grid.dz, m, +1);
      }
    });
  }
}

void fill_ghost(CellVectorField& u, const GridSpec& grid, const VectorBC& bc,
                WorkerPool& pool) {
  fill_ghost(u.x, grid, bc.x, pool);
  fill_ghost(u.y, grid, bc.y, pool);
  fill_ghost(u.z, grid, bc.z, pool);
}

Profile plane_average(const CellScalarField& f, const GridSpec& grid,
                      WorkerPool& pool) {
  const int nx = f.nx(), ny = f.ny(), nz = f.nz();
  const auto& K = kern::active();
  Profile p;
  p.z.resize(nz);
  p.value.resize(nz);
  pool.for_each(0, nz, [&](int k) {
    std::vector<double> rows(ny);
    for (int j = 0; j < ny; ++j) rows[j] = K.row_sum(f.row(j, k), nx);
    p.value[k] = kern::pairwise_combine(rows.data(), ny) / (double(nx) * ny);
    p.z[k] = grid.zc(k);
  });
  return p;
}

CellScalarField divergence_mac(const FaceVelocitySet& f, const GridSpec& grid,
                               WorkerPool& pool) {
  CellScalarField d(grid);
  const double idx = 1.0 / grid.dx, idy = 1.0 / grid.dy, idz = 1.0 / grid.dz;
  pool.for_each(0, grid.nz, [&](int k) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        d(i, j, k) = (f.u(i + 1, j, k) - f.u(i, j, k)) * idx +
                     (f.v(i, j + 1, k) - f.v(i, j, k)) * idy +
                     (f.w(i, j, k + 1) - f.w(i, j, k)) * idz;
  });
  return d;
}

double interior_norm2(const CellScalarField& f, const GridSpec& grid,
                      WorkerPool& pool) {
  const auto& K = kern::active();
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  std::vector<double> level(nz);
  pool.for_each(0, nz, [&](int k) {
    std::vector<double> rows(ny);
    for (int j = 0; j < ny; ++j) rows[j] = K.sumsq(f.row(j, k), nx);
    level[k] = kern::pairwise_combine(rows.data(), ny);
  });
  return std::sqrt(kern::pairwise_combine(level.data(), nz));
}

double interior_sum(const CellScalarField& f, const GridSpec& grid,
                    WorkerPool& pool) {
  const auto& K = kern::active();
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  std::vector<double> level(nz);
  pool.for_each(0, nz, [&](int k) {
    std::vector<double> rows(ny);
    for (int j = 0; j < ny; ++j) rows[j] = K.row_sum(f.row(j, k), nx);
    level[k] = kern::pairwise_combine(rows.data(), ny);
  });
  return kern::pairwise_combine(level.data(), nz);
}

} // namespace ablmini
